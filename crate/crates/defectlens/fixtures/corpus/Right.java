package corpus;

public interface Right extends Base0 {
    String right();
}
