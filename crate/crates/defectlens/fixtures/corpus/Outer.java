package corpus;

public class Outer {
    private int count;

    static class Node {
        Node next;
    }

    class Inner {
        public int depth;

        class Deep {
            int level() {
                return depth + 1;
            }
        }

        int bump() {
            return ++count;
        }
    }

    public int walk(Node start) {
        class Counter {
            int n;
        }
        Counter c = new Counter();
        for (Node p = start; p != null; p = p.next) {
            c.n++;
        }
        return c.n;
    }
}
