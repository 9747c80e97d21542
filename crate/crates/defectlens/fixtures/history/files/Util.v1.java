package bank;

public final class Util {
    private Util() {
    }

    public static String normalize(String s) {
        return s.trim().toLowerCase();
    }
}
