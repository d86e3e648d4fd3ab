"""Quick end-to-end check of the pykforms bindings."""

import pykforms as kf


def main():
    f7 = kf.Field("gf(7)")
    assert f7.characteristic == 7
    assert f7.mul("3", "5") == "1"

    q = kf.Form(f7, "x0^2 + x1^2 + x2^2")
    iso = q.isotropy()
    assert iso["verdict"] == "witness"
    assert q.evaluate(iso["witness"]) == "0"

    d = kf.SymbolAlgebra(f7, 3, "3", "5")
    assert d.identity_witness()["isomorphism"]
    assert d.norm_form().dim == 9
    split = d.is_split()
    assert split["verdict"] == "yes"
    assert d.reduced_norm(split["witness"]) == "0"

    j = kf.AlbertAlgebra(f7, "3", "5", "2")
    assert j.norm(["1"] + ["0"] * 26) == "1"
    assert j.norm_form().degree == 3

    lt = kf.Field("gf(7)((t))")
    assert not kf.Symbol(lt, 3, "(t, 3)").is_trivial()
    assert kf.Symbol(lt, 3, "(t, 6)").is_trivial()
    assert lt.p_class("3*t^2", 3) == [2, 1]

    tower = kf.Field("gf(3)((s))((t))")
    pf = kf.Form.pfister(tower, ["t", "s", "-1"])
    assert pf.isotropy()["isotropic"] is False
    out = kf.common_slot(kf.Symbol(tower, 2, "(t, s, -1)"), kf.Symbol(tower, 2, "(s, t, s)"))
    assert out["shared_after"] > out["shared_before"]

    assert kf.cd_bound(7, 3) == 4
    assert kf.ledger(7, 2, "symbol", 3)["total_dim"] == "98"
    assert [r["bound"] for r in kf.bounds_table(3, 5)] == [0, 1, 2, 3, 4, 7]
    print("pykforms smoke test: ok")


if __name__ == "__main__":
    main()
