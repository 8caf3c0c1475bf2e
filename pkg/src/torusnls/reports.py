"""CSV experiment reports with embedded pass/fail verdicts.

File layout:

    # timestamp=...          <- the only line excluded from determinism checks
    # key=value              <- config echo, seed, code version
    col1,col2,...
    <data rows>
    # verdict,<id>,<pass|fail>,<measured>,<threshold>

Floats are written with repr() so the files round-trip losslessly.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class Verdict:
    criterion: str
    passed: bool
    measured: float
    threshold: float


@dataclass
class ExperimentReport:
    header: dict
    columns: list
    rows: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} values, expected {len(self.columns)}"
            )
        self.rows.append(tuple(values))

    def add_verdict(self, criterion: str, passed: bool, measured: float,
                    threshold: float) -> None:
        self.verdicts.append(Verdict(criterion, bool(passed), float(measured),
                                     float(threshold)))

    @property
    def all_pass(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def _format(self, value) -> str:
        if isinstance(value, bool):
            return str(value)
        if isinstance(value, (int,)):
            return str(value)
        if isinstance(value, float):
            return repr(value)
        return str(value)

    def to_csv(self, path) -> None:
        lines = [f"# timestamp={datetime.datetime.now().isoformat()}"]
        for key in sorted(self.header):
            lines.append(f"# {key}={self.header[key]}")
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(self._format(v) for v in row))
        for v in self.verdicts:
            status = "pass" if v.passed else "fail"
            lines.append(
                f"# verdict,{v.criterion},{status},{v.measured!r},{v.threshold!r}"
            )
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def from_csv(cls, path) -> "ExperimentReport":
        header = {}
        columns = None
        rows = []
        verdicts = []
        for line in Path(path).read_text().splitlines():
            if line.startswith("# verdict,"):
                _, crit, status, measured, threshold = line[2:].split(",")
                verdicts.append(Verdict(crit, status == "pass",
                                        float(measured), float(threshold)))
            elif line.startswith("#"):
                key, _, val = line[1:].strip().partition("=")
                header[key.strip()] = val.strip()
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(tuple(_parse(v) for v in line.split(",")))
        report = cls(header=header, columns=columns or [], rows=rows)
        report.verdicts = verdicts
        return report


def _parse(token: str):
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def csv_body(path) -> str:
    """File contents without the timestamp header line, for determinism checks."""
    lines = Path(path).read_text().splitlines()
    return "\n".join(l for l in lines if not l.startswith("# timestamp="))


def write_line_plot(path, x, series: dict, xlabel: str = "", ylabel: str = "",
                    logy: bool = False) -> None:
    """Courtesy SVG line chart; the CSV is the data contract."""
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series.items():
        ax.plot(x, ys, marker="o", label=label)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
