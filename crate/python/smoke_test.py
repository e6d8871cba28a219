"""Smoke test for the ordlab extension module. Build first with
`maturin develop -m crates/python/Cargo.toml` (or `pip install ./crates/python`)."""

import ordlab


def main():
    assert ordlab.eval_m("2") == "2^-10"
    assert ordlab.eval_m("1/2", preset="m_n", n=3) == "1/18"

    cfg = ordlab.Config.preset("classic")
    value, stats = cfg.eval("3/2")
    assert value == "1/32" and stats.total_calls >= stats.distinct_args
    assert cfg.levels("1") == ["1/8", "1/2"]
    points = cfg.sample("-1/2", "21/10")
    assert len(points) == 261 and all(v is not None for _, v in points)
    assert cfg.partition(level=2, prefix=["0"], steps=3) == ["0", "1/2", "3/4"]

    try:
        ordlab.eval_m("1", max_calls=3)
    except ordlab.BudgetExhausted:
        pass
    else:
        raise AssertionError("budget not enforced")

    assert ordlab.iterate_endpoints("const:1", steps=4) == ["0", "1", "2", "3"]

    w = ordlab.Ordinal("w")
    one = ordlab.Ordinal("1")
    assert str((w + one) * (w + one)) == "w^2+w*2+1"
    assert str(one.ord_sum(w)) == "w"
    assert w > one and len({w, ordlab.Ordinal("w")}) == 1
    gamma, bound = ordlab.height_bound(2, one, one, [one, one])
    assert str(bound) == "phi(1,2)", bound
    assert bound > ordlab.Ordinal.veblen(1, ordlab.Ordinal("0"))

    length, witness = ordlab.longest_bad([("1", "3"), ("1/2", "1"), ("0", "2")])
    assert length == 2 and len(witness) == 2
    assert all(n == 0 for name, n in ordlab.lemma_suite(seed=1, instances=50) if name != "instances")

    print("ordlab smoke test passed")


if __name__ == "__main__":
    main()
