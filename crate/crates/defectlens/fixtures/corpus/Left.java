package corpus;

public interface Left extends Base0 {
    default String left() {
        return "L" + id();
    }
}
