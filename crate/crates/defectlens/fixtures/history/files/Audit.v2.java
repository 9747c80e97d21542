package bank;

import java.util.function.Function;

public class Audit {
    private final StringBuilder log = new StringBuilder();

    public Function<String, String> formatter() {
        return new Function<String, String>() {
            @Override
            public String apply(String s) {
                return "[audit] " + s.trim();
            }
        };
    }

    public void record(String event) {
        log.append(formatter().apply(event));
    }
}
