from dataclasses import dataclass, field

import pandas as pd

from src.entities import MetricReport


# Report field -> table column
METRIC_COLUMNS: dict[str, str] = {
    "psnr": "PSNR",
    "ssim": "SSIM",
    "masked_psnr": "masked PSNR",
    "masked_ssim": "masked SSIM",
    "mask_coverage": "coverage",
}

# Neural metrics computed outside this toolkit and merged into the table
EXTERNAL_COLUMNS: tuple[str, ...] = ("LPIPS", "FID", "KID")


@dataclass
class MetricTotals:
    """ Running sums and counts per metric; merge is associative and commutative. """
    sums: dict[str, float] = field(default_factory=lambda: {name: 0.0 for name in METRIC_COLUMNS})
    counts: dict[str, int] = field(default_factory=lambda: {name: 0 for name in METRIC_COLUMNS})
    pairs: int = 0

    def add(self, report: MetricReport) -> "MetricTotals":
        for name, value in report.to_dict().items():
            if value is not None:
                self.sums[name] += float(value)
                self.counts[name] += 1
        self.pairs += 1
        return self

    def merge(self, other: "MetricTotals") -> "MetricTotals":
        return MetricTotals(
            sums={name: self.sums[name] + other.sums[name] for name in METRIC_COLUMNS},
            counts={name: self.counts[name] + other.counts[name] for name in METRIC_COLUMNS},
            pairs=self.pairs + other.pairs,
        )

    def mean(self, name: str) -> float | None:
        return self.sums[name] / self.counts[name] if self.counts[name] else None


class MetricsAggregator:
    @staticmethod
    def aggregate(reports: list[MetricReport]) -> MetricTotals:
        totals: MetricTotals = MetricTotals()
        for report in reports:
            totals.add(report)
        return totals

    @staticmethod
    def build_table(
            totals: MetricTotals,
            external: dict[str, float] | None = None,
            label: str = "all",
    ) -> pd.DataFrame:
        """ One row of mean metrics; external LPIPS/FID/KID values fill their slots when given. """
        row: dict[str, object] = {"split": label, "pairs": totals.pairs}
        for name, column in METRIC_COLUMNS.items():
            row[column] = totals.mean(name)
        for column in EXTERNAL_COLUMNS:
            row[column] = (external or {}).get(column)
        return pd.DataFrame([row])

    @staticmethod
    def format_table(table: pd.DataFrame) -> str:
        return table.to_string(index=False, na_rep="-", float_format=lambda value: f"{value:.4f}") + "\n"
