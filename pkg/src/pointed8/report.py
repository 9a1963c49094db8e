"""Classification report: assembly, consistency checks, JSON / markdown / CSV."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field

from . import __version__
from .config import Config
from .doubles import double_census
from .groups import FiniteGroup, automorphisms, catalog
from .morita import EXPECTED_COUNT, REFERENCE_COUNT, MoritaPartition, morita_partition, omega_subgroup, validate_witness
from .orbits import Census, equivalence_census


class ReportInconsistent(RuntimeError):
    pass


def subgroup_orbit_reps(H: FiniteGroup) -> list[tuple[int, ...]]:
    """Least member of each Aut(H)-orbit of proper nontrivial normal abelian subgroups."""
    auts = automorphisms(H)
    seen, reps = set(), []
    for S in H.subgroups:
        if len(S) in (1, H.order) or S in seen or not H.is_normal(S):
            continue
        if any(H.table[a, b] != H.table[b, a] for a in S for b in S):
            continue
        orbit = {tuple(sorted(int(phi.images[x]) for x in S)) for phi in auts}
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps, key=lambda s: (len(s), s))


def omega_table(config: Config = Config()) -> list[dict]:
    rows = []
    for H in catalog():
        for S in subgroup_orbit_reps(H):
            om = omega_subgroup(H, S, config)
            rows.append({"group": H.name, "subgroup": list(S), "order": len(om),
                         "classes": [list(c) for c in sorted(om)]})
    return rows


@dataclass
class ClassificationReport:
    """Plain-data report; every field is JSON-native so loading is lossless."""

    version: str
    config: dict
    h3: list = field(default_factory=list)          # per group: name, invariant factors, |Aut|
    orbits: list = field(default_factory=list)      # per group: list of orbit records
    census: list = field(default_factory=list)      # the 47 global classes
    omega: list = field(default_factory=list)
    morita: dict = field(default_factory=dict)
    doubles: dict = field(default_factory=dict)

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ClassificationReport":
        rep = cls(**json.loads(text))
        rep.check()
        return rep

    def to_markdown(self) -> str:
        names = [g["name"] for g in self.h3]
        lines = [
            "# Pointed fusion categories of global dimension 8",
            "",
            "| group | H^3(G, C*) | Aut | orbits |",
            "|---|---|---|---|",
        ]
        for g, orb in zip(self.h3, self.orbits):
            facs = " + ".join(f"Z/{d}" for d in g["invariant_factors"])
            lines.append(f"| {g['name']} | {facs} | {g['aut_order']} | {len(orb)} |")
        m = self.morita
        lines += [
            "",
            f"Tensor classes: {len(self.census)}. Morita classes: {m['count']}.",
            "",
            f"Note: {m['note']}",
            "",
            "| Morita class | " + " | ".join(names) + " | double |",
            "|---" * (len(names) + 2) + "|",
        ]
        comm = set(self.doubles["commutative"])
        for cls_ in m["classes"]:
            cells = []
            for name in names:
                labels = [_label(self.census[cid]) for cid in cls_["members"] if self.census[cid]["group"] == name]
                cells.append(", ".join(labels))
            kind = "commutative" if cls_["id"] in comm else "noncommutative"
            lines.append(f"| {cls_['id']} | " + " | ".join(cells) + f" | {kind} |")
        lines += ["", "| group | subgroup | order of Omega |", "|---|---|---|"]
        for row in self.omega:
            lines.append(f"| {row['group']} | {{{','.join(map(str, row['subgroup']))}}} | {row['order']} |")
        c, n = len(self.doubles["commutative"]), len(self.doubles["noncommutative"])
        lines += ["", f"Twisted doubles: {c} commutative, {n} noncommutative.", ""]
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["morita_class", "class_id", "group", "orbit_id", "orbit_size", "class_order", "canonical", "double"])
        comm = set(self.doubles["commutative"])
        for cls_ in self.morita["classes"]:
            for cid in cls_["members"]:
                c = self.census[cid]
                w.writerow([cls_["id"], cid, c["group"], c["orbit_id"], c["size"], c["class_order"],
                            " ".join(map(str, c["canonical"])),
                            "commutative" if cls_["id"] in comm else "noncommutative"])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "md":
            return self.to_markdown()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")

    # -- consistency ---------------------------------------------------------
    def check(self) -> None:
        def need(cond, msg):
            if not cond:
                raise ReportInconsistent(msg)

        need(len(self.h3) == len(self.orbits), "group sections disagree")
        total = 0
        for g, orb in zip(self.h3, self.orbits):
            size = 1
            for d in g["invariant_factors"]:
                size *= d
            need(sum(o["size"] for o in orb) == size, f"orbit sizes of {g['name']} do not sum to |H^3|")
            need(all(g["aut_order"] % o["size"] == 0 for o in orb), f"orbit size of {g['name']} does not divide |Aut|")
            total += len(orb)
        need(total == len(self.census), "census size differs from the orbit total")
        m = self.morita
        members = sorted(c for cls_ in m["classes"] for c in cls_["members"])
        need(members == list(range(len(self.census))), "Morita classes do not partition the census")
        need(m["count"] == len(m["classes"]), "Morita count differs from the class list")
        ids = sorted(self.doubles["commutative"] + self.doubles["noncommutative"])
        need(ids == list(range(m["count"])), "double census does not cover the Morita classes")
        for row in self.omega:
            need(row["order"] == len(row["classes"]), "Omega order differs from its class list")


def _label(c: dict) -> str:
    return f"o{c['orbit_id']}(" + ",".join(map(str, c["canonical"])) + ")"


def build_report(config: Config = Config(), census: Census | None = None,
                 partition: MoritaPartition | None = None) -> ClassificationReport:
    census = census or equivalence_census(config)
    partition = partition or morita_partition(census, config=config)
    if config.verify:
        for e in partition.edges:
            if not validate_witness(e, census):
                raise ReportInconsistent("a Morita witness failed re-validation")
    doubles = double_census(partition, config)
    h3, orbits = [], []
    for t in census.tables:
        h3.append({"name": t.group.name, "invariant_factors": list(t.h3.invariant_factors), "aut_order": t.aut_order})
        orbits.append([
            {"id": o.id, "size": o.size, "class_order": o.class_order, "canonical": list(o.canonical),
             "fingerprint": {"class_order": o.fingerprint[0], "orbit_size": o.fingerprint[1],
                             "restrictions": [list(p) for p in o.fingerprint[2]]} if o.fingerprint else None}
            for o in t.orbits
        ])
    classes = []
    for i, (members, wit) in enumerate(zip(partition.classes, partition.witnesses)):
        classes.append({
            "id": i,
            "members": list(members),
            "groups": [[census.classes[m].group_name, census.classes[m].orbit_id] for m in members],
            "witnesses": [{"class_a": e.class_a, "class_b": e.class_b, **e.witness.to_json()} for e in wit],
        })
    morita = {
        "count": partition.count,
        "expected_count": EXPECTED_COUNT,
        "reference_count": REFERENCE_COUNT,
        "discrepancy": partition.count != REFERENCE_COUNT,
        "note": partition.discrepancy_note,
        "edges": len(partition.edges),
        "merged_signatures": sorted([list(k), v] for k, v in partition.merged_signatures().items()),
        "singletons": partition.singletons,
        "classes": classes,
    }
    rep = ClassificationReport(
        version=__version__,
        config=config.as_dict(),
        h3=h3,
        orbits=orbits,
        census=[{"id": c.id, "group": c.group_name, "orbit_id": c.orbit_id, "size": c.size,
                 "class_order": c.class_order, "canonical": list(c.canonical)} for c in census.classes],
        omega=omega_table(config),
        morita=morita,
        doubles=doubles.to_json(),
    )
    rep.check()
    return rep
