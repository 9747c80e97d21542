package corpus;

public interface Base0 {
    int VERSION = 1;

    String id();
}
