package corpus;

class Chain {
    private int state;

    void first() {
        second();
    }

    void second() {
        third(1);
    }

    void third(int step) {
        state += step;
    }

    void lonely() {
    }
}
