from .metric_report import MetricReport
