package corpus;

public class RoundedSquare extends Square {
    public double radius;

    public RoundedSquare(double side, double radius) {
        super(side);
        this.radius = radius;
    }

    @Override
    public double area() {
        double corner = (4 - Math.PI) * radius * radius;
        return super.area() - corner;
    }
}
