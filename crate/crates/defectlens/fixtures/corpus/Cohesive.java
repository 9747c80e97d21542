package corpus;

public class Cohesive {
    private int a;
    private int b;

    public void m1() {
        a++;
    }

    public void m2() {
        a = a * 2;
    }

    public int m3() {
        return b;
    }
}
