package corpus.trio;

public class Gamma {
    public static int compute(int x) {
        return x * x;
    }
}
