package corpus;

public class Flow {
    static int counter;

    static {
        counter = 0;
    }

    {
        if (counter > 0) {
            counter--;
        }
    }

    public int classify(int a, int b) {
        if (a > 0) {
            return 1;
        } else if (b > 0) {
            return 2;
        } else if (a == b) {
            return 3;
        } else {
            if (a < -10) {
                return 4;
            }
        }
        return 0;
    }

    public int loops(int[] xs) {
        int total = 0;
        for (int i = 0; i < xs.length; i++) {
            while (total < 100 && xs[i] > 0) {
                try {
                    total += xs[i] / (i + 1);
                } catch (ArithmeticException e) {
                    total = total > 0 ? total : -1;
                }
            }
        }
        return total;
    }

    public String label(int code) {
        switch (code) {
            case 1:
                return "one";
            case 2:
            case 3:
                return "few";
            default:
                return code < 0 || code > 99 ? "odd" : "many";
        }
    }

    void spin(int n) {
        do {
            n--;
        } while (n > 0);
        Runnable r = () -> {
            if (counter > 5) {
                counter++;
            }
        };
    }
}
