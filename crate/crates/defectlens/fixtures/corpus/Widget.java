package corpus;

import java.util.ArrayList;
import java.util.List;

public class Widget {
    // registered callbacks
    private final List<Runnable> listeners = new ArrayList<>();
    public String label;

    /*
     * Creates a labelled widget.
     */
    public Widget(String label) {
        this.label = label;
    }

    public void register() {
        listeners.add(new Runnable() {
            @Override
            public void run() {
                System.out.println("fired"); // trace
            }
        });
    }

    /* Fire all listeners. */
    public int fire() {
        int count = 0;
        for (Runnable r : listeners) {
            r.run();
            count++;
        }
        return count;
    }

    int size() {
        return listeners.size();
    }
}
