"""Independent simulation oracle for the grow/prune trigger scenarios.

Re-implements the tracker bookkeeping directly (running mean / population
std, independent running minima restarted after each fired trigger) and
prints the 1-based indices at which each rule fires for the constructed
sequences. The indices are frozen into test_structure.cpp and acceptance.cpp.

    python3 tests/oracle/trigger_oracle.py

Frozen outputs:

    harmonic decay (0.3 + 0.6/t, 30 samples), growth rule  -> fires {1}
    decay then sustained rise at t=13,       growth rule    -> fires {1, 13}
    noisy plateau + one-sample spike at t=11, prune rule    -> fires {1}
    same spike sequence, growth-style single coefficient    -> fires {1, 11}
    plateau + sustained rise from t=11,      prune rule     -> fires {1, 12}
"""
import math


class Tracker:
    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.mean_min = 0.0
        self.std_min = 0.0
        self.seeded = False

    def std(self):
        return math.sqrt(self.m2 / self.count) if self.count else 0.0

    def update(self, v):
        self.count += 1
        d = v - self.mean
        self.mean += d / self.count
        self.m2 += d * (v - self.mean)
        if not self.seeded:
            self.mean_min = self.mean
            self.std_min = self.std()
            self.seeded = True
        else:
            self.mean_min = min(self.mean_min, self.mean)
            self.std_min = min(self.std_min, self.std())

    def reset_minima(self):
        self.mean_min = self.mean
        self.std_min = self.std()
        self.seeded = False


def coefficient(v):
    return 1.3 * math.exp(-v) + 0.7


def fires(seq, factor):
    t = Tracker()
    out = []
    for idx, v in enumerate(seq, start=1):
        t.update(v)
        if t.mean + t.std() >= t.mean_min + factor * coefficient(v) * t.std_min:
            out.append(idx)
            t.reset_minima()
    return out


def main():
    harmonic = [0.3 + 0.6 / t for t in range(1, 31)]
    print("harmonic decay, growth rule:", fires(harmonic, 1.0))

    jump = harmonic[:12] + [0.95, 0.9, 0.6, 0.5, 0.45, 0.42, 0.4, 0.39]
    print("decay + sustained rise, growth rule:", fires(jump, 1.0))

    spike = [0.30, 0.10, 0.28, 0.12, 0.26, 0.14, 0.24, 0.16, 0.22, 0.18, 0.60,
             0.20, 0.19, 0.21, 0.20]
    print("plateau + spike, prune rule (factor 2):", fires(spike, 2.0))
    print("plateau + spike, single coefficient:   ", fires(spike, 1.0))

    rise = [0.30, 0.10, 0.28, 0.12, 0.26, 0.14, 0.24, 0.16, 0.22, 0.18, 0.55,
            0.62, 0.70, 0.75, 0.80]
    print("plateau + sustained rise, prune rule:", fires(rise, 2.0))


if __name__ == "__main__":
    main()
