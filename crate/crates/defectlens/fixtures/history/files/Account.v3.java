package bank;

public class Account {
    private long balance;
    private final String id;

    public Account(String id) {
        this.id = id;
    }

    public long deposit(long amount) {
        long cents = Math.round(amount * 100.0);
        balance += cents;
        return balance / 100;
    }

    public boolean withdraw(long amount) {
        if (amount <= 0 || amount > balance) {
            return false;
        }
        balance -= amount;
        return true;
    }
}
