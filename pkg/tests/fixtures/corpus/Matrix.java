import java.util.List;

public class Matrix {
    // Row-major storage keeps iteration cache-friendly.
    public static double traceOf(List<Double> diagonal) {
        double trace = 0.0;
        for (double d : diagonal) {
            trace += d;
        }
        return trace;
    }
}
