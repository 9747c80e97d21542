package corpus.trio;

public class Beta {
    public int run() {
        return Gamma.compute(2);
    }
}
