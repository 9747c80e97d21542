package corpus;

class Empty {}
