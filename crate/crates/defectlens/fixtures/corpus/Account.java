package corpus;

import java.util.ArrayList;
import java.util.List;

public class Account {
    // owner name
    public String owner, alias;
    public long balance; // cents
    private final List<Entry> history = new ArrayList<>();
    public static class Entry {
        public final long amount;
        Entry(long amount) {
            this.amount = amount;
        }
    }

    /* Deposit money. */
    public void deposit(long amount) {
        if (amount <= 0) {
            throw new IllegalArgumentException("amount"); // guard
        }
        balance += amount;
        history.add(new Entry(amount));
    }
    /*
     * Withdraw money,
     * failing when the balance is short.
     */
    public boolean withdraw(long amount) {
        if (amount > balance || amount <= 0) {
            return false;
        }
        balance -= amount;
        history.add(new Entry(-amount));
        return true;
    }
    public int entries() {
        return history.size();
    }
    public long total() { return balance; }
}
