"""Blow-up analysis: generic q-scan plus any closed-form criterion of the model."""

from typing import Any, Dict, List

import numpy as np

from nonstrict.commands.base_command import BaseCommand
from nonstrict.core.blowup import DEFAULT_HORIZON, DEFAULT_POINTS, DEFAULT_TOL, BlowupReport, blowup_report
from nonstrict.criteria import get_criterion
from nonstrict.criteria.base_criterion import CriterionResult
from nonstrict.errors import CriterionMismatchError
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)


def compare_verdicts(report: BlowupReport, result: CriterionResult) -> List[float]:
    """Starting points where the criterion and the q-scan disagree."""
    scan_smooth = np.array([root is None for _, root in report.per_point])
    disagree = scan_smooth != result.smooth_points
    return [float(x) for x in result.x[disagree]]


class AnalyzeCommand(BaseCommand):
    """Scan q(t; x0) for a gradient catastrophe and cross-check closed-form criteria."""

    name = 'analyze'
    OPTIONS = {
        'Tmax': DEFAULT_HORIZON,
        'scan_step': None,
        'tol': DEFAULT_TOL,
        'workers': None,
        'strict': True,
    }

    def execute(self) -> None:
        entry = self.model()
        prof = self.profile(entry)
        xs = self.grid(prof, DEFAULT_POINTS)
        Tmax = self.number('Tmax', 0.0, strict=True)
        scan_step = self.number('scan_step', 0.0, strict=True, allow_none=True)
        tol = self.number('tol', 0.0, strict=True)
        workers = self.options.get('workers')

        if entry.spec.has_diffusion:
            logger.info(f"Model '{entry.name}' has diffusion; analyzing its inviscid part")
        report = blowup_report(entry.spec.inviscid(), prof, xs, Tmax, scan_step, tol, workers)

        criteria: List[Dict[str, Any]] = []
        mismatches: List[float] = []
        for name in entry.criteria:
            result = get_criterion(name, entry.criterion_config()).check(prof, xs)
            disagree = compare_verdicts(report, result)
            mismatches.extend(disagree)
            summary = result.to_dict()
            summary['agreement'] = not disagree
            summary['disagreeing_x'] = disagree
            criteria.append(summary)
            logger.info(f"Criterion '{name}': {result.verdict.value}, "
                        f"{'agrees' if not disagree else f'disagrees at {len(disagree)} points'}")

        agreement = None if not criteria else not mismatches
        payload = {
            'model': entry.to_dict(),
            'profile': {'sources': list(prof.sources), 'domain': list(prof.domain), 'periodic': prof.periodic},
            'verdict': report.verdict.value,
            't_star': report.t_star,
            'x_star': report.x_star,
            'scan': report.to_dict(),
            'criteria': criteria,
            'agreement': agreement,
        }
        self.writer.write_report(self.report_name, payload)

        header = ['x0', 'first_root'] + [f"{c['name']}_value" for c in criteria]
        columns = [[c_point['value'] for c_point in c['per_point']] for c in criteria]
        rows = ([x0, root] + [col[k] for col in columns] for k, (x0, root) in enumerate(report.per_point))
        self.writer.write_csv(self.csv_name, header, rows)

        self.stats = {
            'points_scanned': len(report.per_point),
            'roots_found': sum(1 for _, root in report.per_point if root is not None),
            'touch_points': len(report.touch_points),
            'verdict': report.verdict.value,
            't_star': report.t_star,
            'criteria_checked': len(criteria),
        }

        if mismatches and self.options.get('strict', True):
            raise CriterionMismatchError(
                f"Closed-form criterion and q-scan disagree at {len(mismatches)} point(s), "
                f"first x0={mismatches[0]:.6g}"
            )
