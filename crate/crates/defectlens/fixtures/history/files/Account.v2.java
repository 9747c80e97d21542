package bank;

public class Account {
    private long balance;
    private final String id;

    public Account(String id) {
        this.id = id;
    }

    public long deposit(long amount) {
        long cents = amount * 100;
        balance += cents / 100;
        return balance;
    }

    public boolean withdraw(long amount) {
        if (amount <= 0 || amount > balance) {
            return false;
        }
        balance -= amount;
        return true;
    }
}
