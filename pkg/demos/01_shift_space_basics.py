"""Symbolic base dynamics: shift spaces, the metric, brackets, and sampling.

The base of every skew product here is a two-sided shift on finitely many
symbols, possibly restricted by a transition matrix (a subshift of finite
type).  Two sequences are close when they agree on a long window around
index 0; the bracket splices the past of one sequence onto the future of
another and is the local product structure everything downstream relies on.
"""

import skewlab as sl


def main():
    space = sl.ShiftSpace(2, metric_base=0.5)
    measure = sl.BaseMeasure("bernoulli", probs=(0.5, 0.5))

    x = sl.sample_sequence(space, measure, 1, 0)
    y = sl.sample_sequence(space, measure, 1, 1)
    print("window of x around 0:", [x.symbol(j) for j in range(-5, 6)])
    print("window of y around 0:", [y.symbol(j) for j in range(-5, 6)])
    print("d(x, y) =", sl.distance(x, y), "(= metric_base^agreement radius)")

    if x.symbol(0) == y.symbol(0):
        b = sl.bracket(x, y)
        print("bracket past  (from x):", [b.symbol(j) for j in range(-5, 1)])
        print("bracket future (from y):", [b.symbol(j) for j in range(0, 6)])
        print("d(bracket, y) =", sl.distance(b, y), "-> on the local stable set of y")

    # periodic and homoclinic points drive the criterion machinery
    p = sl.PeriodicPoint((0,))
    z = sl.homoclinic_point(space, p, insert_symbol=1, insert_index=1)
    print("homoclinic window:", [z.symbol(j) for j in range(-3, 6)],
          "(one inserted 1 in a sea of 0s)")

    # a golden-mean subshift: symbol 1 may not follow itself
    sft = sl.ShiftSpace(2, transitions=((True, True), (True, False)))
    words = sl.admissible_words(sft, 3)
    print("admissible length-3 words without '11':", words)

    markov = sl.BaseMeasure("markov", P=((0.9, 0.1), (1.0, 0.0)))
    w = sl.sample_sequence(sft, markov, 2, 0)
    window = [w.symbol(j) for j in range(-20, 21)]
    print("Markov sample respects the transitions:", window)
    assert all(not (a == b == 1) for a, b in zip(window, window[1:]))


if __name__ == "__main__":
    main()
