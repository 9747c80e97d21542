package corpus.trio;

public class Alpha {
    private Beta beta;
}
