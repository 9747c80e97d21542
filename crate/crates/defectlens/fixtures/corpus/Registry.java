package corpus;

import java.util.ArrayList;

// Keeps shapes in insertion order.
public class Registry extends ArrayList<Shape> {
    /** Adds a circle of the given radius. */
    public Registry withCircle(double r) {
        add(new Circle(r)); // boxed
        return this;
    }
}
