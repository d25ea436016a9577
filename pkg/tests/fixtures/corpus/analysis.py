import math
import numpy as np

# Rolling mean over a fixed window.
def rolling_mean(xs, window):
    if window <= 0:
        return []
    out = []
    for i in range(len(xs) - window + 1):
        # slice copy keeps the input untouched
        out.append(math.fsum(xs[i:i + window]) / window)
    return out
