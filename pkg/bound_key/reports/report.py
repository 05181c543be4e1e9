"""Command reports: parameters, results and pass/fail checks."""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from bound_key.reports.rational import SIGNIFICANT_DIGITS, to_jsonable
from bound_key.reports.store import atomic_write
from observability.logger import get_logger

logger = get_logger("Report")

CSV_FLOAT_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: Any = None
    reference: Any = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "value": to_jsonable(self.value),
            "reference": to_jsonable(self.reference),
        }


@dataclass
class Report:
    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    data: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    table: Optional[pd.DataFrame] = None
    # Exchange documents, written at full precision.
    exports: Dict[str, Any] = field(default_factory=dict)

    def check(self, name: str, passed: bool, value: Any = None, reference: Any = None) -> bool:
        passed = bool(passed)
        self.checks.append(Check(name, passed, value, reference))
        if not passed:
            logger.warning("Check failed: %s (value=%s, reference=%s)", name, value, reference)
        return passed

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "command": self.command,
            "parameters": to_jsonable(self.parameters),
            "data": to_jsonable(self.data),
            "checks": [c.to_dict() for c in self.checks],
            "ok": self.ok,
        }
        if self.table is not None:
            out["table"] = to_jsonable(self.table.astype(object).where(self.table.notna(), None).to_dict(orient="records"))
        if self.exports:
            out["matrices"] = self.exports
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def checks_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [c.to_dict() for c in self.checks],
            columns=["name", "passed", "value", "reference"],
        )

    def to_csv(self) -> str:
        """The command's table when it has one, otherwise the checks."""
        frame = self.table if self.table is not None else self.checks_frame()
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, na_rep="", lineterminator="\n")

    def render(self, fmt: str = "json") -> str:
        return self.to_csv() if fmt == "csv" else self.to_json()

    def write(self, path: str, fmt: str = "json") -> None:
        atomic_write(path, self.render(fmt))

    def summary(self) -> str:
        """One line per check, for humans."""
        lines = [f"{self.command}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name} = {to_jsonable(c.value)}")
        return "\n".join(lines)
