package corpus;

public class Diamond implements Left, Right {
    public String id() {
        return "D";
    }

    public String right() {
        return "R" + left();
    }
}
