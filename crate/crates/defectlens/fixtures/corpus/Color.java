package corpus;

public enum Color {
    RED("r"),
    GREEN("g") {
        @Override
        public String code() {
            return "G!";
        }
    },
    BLUE("b");

    private final String tag;

    Color(String tag) {
        this.tag = tag;
    }

    public String code() {
        return tag;
    }
}
