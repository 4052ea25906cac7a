"""Monte-Carlo study of the stochastic regularization as sigma -> 0."""

from pathlib import Path

from nonstrict.commands.base_command import BaseCommand
from nonstrict.errors import ConfigError
from nonstrict.stochastic.estimation import convergence_study
from nonstrict.utils.logger import get_logger

logger = get_logger(__name__)


class MonteCarloCommand(BaseCommand):
    """Run convergence_study and write the error table plus one field table per sigma."""

    name = 'montecarlo'
    OPTIONS = {
        'sigma_list': [0.4, 0.2, 0.1],
        'N': 100_000,
        't_end': 1.0,
        'dt': 0.01,
        'bandwidth': None,
        'seed': 0,
        'workers': None,
        'fields': True,
    }

    def execute(self) -> None:
        N = self.options.get('N')
        if not isinstance(N, int) or isinstance(N, bool) or N < 1:
            raise ConfigError(f"'N' must be a positive integer, got {N!r}")
        seed = self.options.get('seed')
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ConfigError(f"'seed' must be a non-negative integer, got {seed!r}")
        sigmas = self.numbers('sigma_list')
        if not sigmas or min(sigmas) < 0:
            raise ConfigError("'sigma_list' must be a non-empty list of non-negative values")

        entry = self.model()
        prof = self.profile(entry)
        xs = self.grid(prof, 128)
        study = convergence_study(
            entry.spec.inviscid(), prof, sigmas, N,
            self.number('t_end', 0.0), self.number('dt', 0.0, strict=True), xs,
            self.number('bandwidth', 0.0, strict=True, allow_none=True), seed,
            workers=self.options.get('workers')
        )

        self.writer.write_csv(self.csv_name, ['sigma', 'error', 'bandwidth'],
                              ([r.sigma, r.error, r.bandwidth] for r in study.rows),
                              {'seed_policy': study.seed_policy, 'N': N, 't_end': study.t_end})
        self.writer.write_report(self.report_name, study.to_dict())

        if self.options.get('fields', True):
            stem = Path(self.csv_name).stem
            n = entry.spec.n
            header = (['x', 'rho'] + [f"V{i + 1}_hat" for i in range(n)]
                      + [f"V{i + 1}" for i in range(n)])
            for k, row in enumerate(study.rows):
                est = row.estimate
                self.writer.write_csv(
                    f"{stem}_fields_{k}.csv", header,
                    ([x, est.rho[j]] + list(est.v_hat[:, j]) + list(study.reference[:, j])
                     for j, x in enumerate(est.x_grid)),
                    {'sigma': row.sigma, 'bandwidth': row.bandwidth}
                )

        errors = study.errors
        self.stats = {
            'particles': N,
            'sigmas': len(sigmas),
            'steps': int(round(study.t_end / study.dt)) if study.t_end else 0,
            'smallest_error': min(errors),
            'monotone': all(a > b for a, b in zip(errors, errors[1:])),
        }
