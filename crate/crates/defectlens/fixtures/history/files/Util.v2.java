package bank;

public final class Util {
    private Util() {
    }

    public static String normalize(String s) {
        return s.trim().toLowerCase();
    }

    public static boolean isBlank(String s) {
        return s.trim().isEmpty();
    }
}
