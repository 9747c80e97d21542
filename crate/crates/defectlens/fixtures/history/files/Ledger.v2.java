package bank;

import java.util.ArrayList;
import java.util.List;

public class Ledger {
    private final List<Line> lines = new ArrayList<>();

    public static class Line {
        final String text;

        Line(String text) {
            this.text = text;
        }

        String[] parts() {
            return text.split(",");
        }
    }

    public void add(String raw) {
        lines.add(new Line(raw));
    }

    public int size() {
        return lines == null ? 0 : lines.size();
    }
}
