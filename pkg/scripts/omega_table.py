"""Print |Omega(H; A)| for every Aut-orbit of normal abelian subgroups A."""

from pointed8.report import omega_table

if __name__ == "__main__":
    for row in omega_table():
        sub = "{" + ",".join(map(str, row["subgroup"])) + "}"
        print(f"{row['group']:6} {sub:12} {row['order']:3}")
