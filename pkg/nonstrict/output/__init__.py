"""Report and table serialization."""

from nonstrict.output.report_writer import ReportWriter, config_hash, read_csv, read_report

__all__ = ['ReportWriter', 'config_hash', 'read_csv', 'read_report']
