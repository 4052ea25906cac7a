"""Solution tables from characteristics, finite differences or both."""

from typing import Iterator, List

import numpy as np

from nonstrict.commands.base_command import BaseCommand
from nonstrict.core.blowup import blowup_report
from nonstrict.core.characteristics import grid_solution
from nonstrict.errors import BlowupError, ConfigError
from nonstrict.parabolic.fd_solver import fd_solve
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)

METHODS = ('characteristics', 'fd', 'compare')


class SimulateCommand(BaseCommand):
    """Tabulate V(t, x) at the requested output times."""

    name = 'simulate'
    OPTIONS = {
        'method': 'characteristics',
        'times': [0.0],
        'dx': 0.01,
        'dt': 0.005,
        'safety': 0.9,
        'period_check': False,
        'workers': None,
    }

    def _times(self) -> List[float]:
        times = sorted(set(self.numbers('times')))
        if not times or times[0] < 0:
            raise ConfigError("'times' must be a non-empty list of non-negative times")
        return times

    def _check_before_blowup(self, entry, prof, xs, t_last: float) -> None:
        if t_last <= 0:
            return
        report = blowup_report(entry.spec.inviscid(), prof, xs, Tmax=t_last,
                               workers=self.options.get('workers'))
        if report.blows_up:
            raise BlowupError(
                f"Requested t={t_last} is at or past the gradient catastrophe (x0={report.x_star:.6g})",
                report.t_star
            )

    def execute(self) -> None:
        method = self.options.get('method')
        if method not in METHODS:
            raise ConfigError(f"Unknown simulate method '{method}'. Available: {', '.join(METHODS)}")
        entry = self.model()
        prof = self.profile(entry)
        times = self._times()
        n = entry.spec.n
        self.stats = {'method': method, 'output_times': len(times)}

        if method == 'characteristics':
            xs = self.grid(prof, 256)
            self._check_before_blowup(entry, prof, xs, times[-1])
            solutions = [grid_solution(entry.spec, prof, t, xs) for t in times]
            header = ['t', 'x'] + [f"V{i + 1}" for i in range(n)] + ['q']

            def rows() -> Iterator[list]:
                for sol in solutions:
                    for k, x in enumerate(sol.x):
                        yield [sol.t, x] + list(sol.values[:, k]) + [sol.jacobian[k]]

            self.writer.write_csv(self.csv_name, header, rows())
            self.stats['min_q'] = min(sol.min_q for sol in solutions)
            if self.options.get('period_check'):
                self.stats['period_error'] = self._period_error(entry, prof, xs)
            self.stats['grid_points'] = int(xs.size)
            return

        history = fd_solve(entry.spec, prof, self.number('dx', 0.0, strict=True),
                           self.number('dt', 0.0, strict=True), times[-1],
                           self.number('safety', 0.0, strict=True), times)
        self.stats.update({'steps': history.steps, 'dt_reductions': history.reductions,
                           'grid_points': int(history.states[0].x_grid.size)})

        if method == 'fd':
            header = ['t', 'x'] + [f"V{i + 1}" for i in range(n)]

            def rows() -> Iterator[list]:
                for state in history:
                    for k, x in enumerate(state.x_grid):
                        yield [state.t, x] + list(state.fields[:, k])

            self.writer.write_csv(self.csv_name, header, rows())
            return

        if entry.spec.has_diffusion:
            logger.warning(f"Model '{entry.name}' has diffusion; the characteristics reference ignores it")
        self._check_before_blowup(entry, prof, history.states[0].x_grid, times[-1])
        reference = [grid_solution(entry.spec, prof, s.t, s.x_grid) for s in history]
        errors = [np.max(np.abs(s.fields - ref.values), axis=0) for s, ref in zip(history, reference)]
        header = (['t', 'x'] + [f"V{i + 1}" for i in range(n)]
                  + [f"V{i + 1}_fd" for i in range(n)] + ['error'])

        def rows() -> Iterator[list]:
            for state, ref, err in zip(history, reference, errors):
                for k, x in enumerate(state.x_grid):
                    yield [state.t, x] + list(ref.values[:, k]) + list(state.fields[:, k]) + [err[k]]

        self.writer.write_csv(self.csv_name, header, rows())
        self.stats['max_error'] = float(max(np.max(e) for e in errors))

    def _period_error(self, entry, prof, xs) -> float:
        """L-infinity distance between the solution after one model period and the data."""
        if entry.period is None:
            raise ConfigError(f"Model '{entry.name}' with these parameters has no oscillation period")
        self._check_before_blowup(entry, prof, xs, entry.period)
        after = grid_solution(entry.spec, prof, entry.period, xs).values
        error = float(np.nanmax(np.abs(after - prof.value(xs))))
        logger.info(f"Period check at t={entry.period:.12g}: L-inf error {error:.3e}")
        return error
