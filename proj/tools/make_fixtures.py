#!/usr/bin/env python3
"""Writes the category files in tests/fixtures/.

Each category is given by a concrete model (pointed maps, or a pointed
poset); the composition table is computed from the model.
"""
import itertools
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def emit(path, title, objects, morphisms, compose, cof, sizes, budget, w=None):
    """morphisms: list of (name, src, tgt, value); compose(g, f) on values."""
    by_value = {(s, t, v): n for n, s, t, v in morphisms}
    ids = {n for n, s, t, v in morphisms if n.startswith("id_")}
    lines = [f"# {title}", "OBJECTS", " ".join(objects), "MORPHISMS"]
    lines += [f"{n} : {s} -> {t}" for n, s, t, v in morphisms if n not in ids]
    lines.append("COMPOSE")
    for (nf, sf, tf, vf), (ng, sg, tg, vg) in itertools.product(morphisms, repeat=2):
        if tf != sg or nf in ids or ng in ids:
            continue
        lines.append(f"{ng} o {nf} = {by_value[(sf, tg, compose(vg, vf))]}")
    lines.append("COF")
    lines += [n for n in cof if n not in ids]
    if w is not None:
        lines.append("W")
        lines += [n for n in w if n not in ids]
    lines.append("SIZE")
    lines += [f"{o} = {sizes[o]}" for o in objects]
    lines += ["BUDGET", str(budget)]
    (OUT / path).write_text("\n".join(lines) + "\n")


def pointed_maps(card, objects):
    """All basepoint-preserving maps between {*, 1..card[x]}; value = images."""
    out = []
    for s, t in itertools.product(objects, repeat=2):
        for images in itertools.product(range(card[t] + 1), repeat=card[s]):
            out.append((s, t, images))
    return out


def pointed_compose(g, f):
    return tuple(0 if x == 0 else g[x - 1] for x in f)


def pointed_one(path, title, cof_all, cof_zero, budget=1):
    objects = ["0", "P"]
    card = {"0": 0, "P": 1}
    names = {("0", "0", ()): "id_0", ("0", "P", ()): "z", ("P", "0", (0,)): "t",
             ("P", "P", (0,)): "e", ("P", "P", (1,)): "id_P"}
    mors = [(names[m], *m) for m in pointed_maps(card, objects)]
    cof = [n for n, *_ in mors] if cof_all else (["z"] if cof_zero else [])
    emit(path, title, objects, mors, pointed_compose, cof, card, budget)


def iso_pair():
    objects = ["0", "A", "B"]
    card = {"0": 0, "A": 1, "B": 1}
    mors = []
    for s, t, v in pointed_maps(card, objects):
        if s == t and v == tuple(range(1, card[s] + 1)):
            name = f"id_{s}"
        elif s == "A" and t == "B" and v == (1,):
            name = "a"
        elif s == "B" and t == "A" and v == (1,):
            name = "b"
        else:
            name = f"z{s}{t}"
        mors.append((name, s, t, v))
    cof = ["a", "b", "z0A", "z0B"]
    emit("iso_pair.cat", "two isomorphic objects with a zero object", objects, mors,
         pointed_compose, cof, card, 1)


def pointed_poset(path, title, cof_iotas):
    """Hom(A, B) = {zero} plus the inclusion when A <= B (A, B nonzero)."""
    objects = ["0", "X", "Y", "Z", "P"]
    below = {("X", "Y"), ("X", "Z"), ("Y", "P"), ("Z", "P"), ("X", "P")}
    sizes = {"0": 0, "X": 10, "Y": 11, "Z": 11, "P": 12}
    mors = []
    for s, t in itertools.product(objects, repeat=2):
        if s == t:
            mors.append((f"id_{s}", s, t, "i" if s != "0" else "z"))
            if s != "0":
                mors.append((f"z{s}{t}", s, t, "z"))
            continue
        mors.append((f"z{s}{t}", s, t, "z"))
        if (s, t) in below:
            mors.append((f"i{s}{t}", s, t, "i"))
    compose = lambda g, f: "i" if g == "i" and f == "i" else "z"
    cof = [f"z0{o}" for o in objects if o != "0"] + cof_iotas
    emit(path, title, objects, mors, compose, cof, sizes, 12)


if __name__ == "__main__":
    pointed_one("pointed_one.cat", "the pointed sets {*} and {*, 1}", False, True)
    pointed_one("pointed_one_maximal.cat", "pointed sets {*}, {*, 1}; every map ingressive",
                True, True, budget=0)
    pointed_one("zero_map_not_ingressive.cat", "pointed sets {*}, {*, 1}; only isomorphisms ingressive",
                False, False)
    iso_pair()
    pointed_poset("square_ok.cat", "pointed poset X <= Y, Z <= P", ["iXY", "iXZ", "iYP", "iZP", "iXP"])
    pointed_poset("pushout_not_ingressive.cat", "pointed poset; Z -> P not ingressive", ["iXY"])
