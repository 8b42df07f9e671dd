from .metrics_exceptions import *
from .metrics_calculator import MetricsCalculator
from .metrics_aggregator import MetricsAggregator, MetricTotals, METRIC_COLUMNS, EXTERNAL_COLUMNS
