package corpus;

public abstract class Shape {
    protected double scale = 1.0;

    public abstract double area();

    public double scaled() {
        return area() * scale;
    }
}
