"""CLI invocations shared by the CLI tests and the determinism acceptance check."""

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_FILES = sorted(FIXTURES.glob("*.json"))


def recipes(out: Path) -> list[tuple[list[str], int]]:
    """``(argv, expected exit code)`` for every command over every fixture."""
    runs: list[tuple[list[str], int]] = [
        (["gen", "--facilities", "20", "--customers", "40", "--seed", "7", "--out", str(out / "gen.json")], 0),
        (["gen", "--facility-intensity", "0.002", "--customers", "15", "--seed", "2", "--out", str(out / "gen_ppp.json")], 0),
        (["bench", "--solvers", "sa,pso,ga,patternsearch", "--dim", "3", "--seeds", "0-1", "--budget", "300",
          "--out-csv", str(out / "bench.csv"), "--out-md", str(out / "bench.md")], 0),
        (["bench", "--seeds", "", "--out-csv", str(out / "empty.csv"), "--out-md", str(out / "empty.md")], 0),
    ]
    expected_flp = {"short_capacity": 0, "equity_partial": 2, "extension": 2}
    for f in FIXTURE_FILES:
        stem = f.stem
        sol, tour = out / f"{stem}.sol.json", out / f"{stem}.tour.json"
        runs.append((["solve-flp", "--instance", str(f), "--mode", "anneal", "--kmax", "150", "--initial-temp", "50", "--seed", "1",
                      "--out", str(out / f"{stem}.anneal.json")], 0))
        runs.append((["solve-flp", "--instance", str(f), "--out", str(sol)], expected_flp.get(stem, 0)))
        runs.append((["solve-tsp", "--instance", str(f), "--kmax", "3000", "--seed", "2", "--out", str(tour)], 0))
        runs.append((["render", "--instance", str(f), "--out", str(out / f"{stem}.svg")], 0))
        runs.append((["render", "--instance", str(f), "--solution", str(out / f"{stem}.anneal.json"),
                      "--out", str(out / f"{stem}.anneal.svg")], 0))
        runs.append((["render", "--instance", str(f), "--solution", str(tour), "--out", str(out / f"{stem}.tour.svg")], 0))
        runs.append((["verify", "--instance", str(f), "--solution", str(tour)], 0))
    return runs
