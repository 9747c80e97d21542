package corpus;

public @interface Marker {
    String value() default "";

    int priority() default 0;
}
