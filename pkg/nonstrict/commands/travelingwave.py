"""Traveling-wave orbits, their classification and periods."""

from typing import Any, Dict, Optional

import numpy as np

from nonstrict.commands.base_command import BaseCommand
from nonstrict.errors import ConfigError, NumericalError
from nonstrict.numkit.ode import OdeTrajectory
from nonstrict.utils.logger import get_logger
from nonstrict.waves.bloodflow import (
    bloodflow_classify,
    bloodflow_orbit,
    bloodflow_orbit_period,
    bloodflow_period,
    bloodflow_psi,
)
from nonstrict.waves.phase_plane import EquilibriumClass, PhasePoint, classify_eigenvalues, closed_orbit_period
from nonstrict.waves.simple_waves import TravelingWaveProblem, inviscid_vector_field, summary, tw_inviscid
from nonstrict.waves.viscous import (
    COLD_PLASMA_VISCOUS,
    STRATIFIED,
    linearized_tw_roots,
    tw_stratified,
    tw_viscous_coldplasma,
)

logger = get_logger(__name__)

KINDS = ('inviscid', 'viscous', 'stratified', 'bloodflow')
STATE_NAMES = {
    'inviscid': None,
    'viscous': ['V', 'dV', 'ddV'],
    'stratified': ['V', 'dV', 'S', 'dS'],
    'bloodflow': ['E', 'V'],
}


def inviscid_classification(problem: TravelingWaveProblem) -> EquilibriumClass:
    """Linearization of dV/dxi = QV / (V_1 - w) at V = 0, i.e. the eigenvalues of -Q/w."""
    eigenvalues = sorted(np.linalg.eigvals(-np.asarray(problem.sys.Q) / problem.w).tolist(),
                         key=lambda z: (round(z.real, 12), z.imag))
    return EquilibriumClass(classify_eigenvalues(eigenvalues), [complex(v) for v in eigenvalues])


class TravelingWaveCommand(BaseCommand):
    """Integrate a traveling-wave orbit and report its equilibrium type and period."""

    name = 'travelingwave'
    needs_profile = False
    OPTIONS = {
        'kind': 'inviscid',
        'w': 2.0,
        'start': [1.0, 0.0],
        'xi_span': [0.0, 100.0],
        'output_step': 0.1,
        'rtol': 1e-10,
        'atol': 1e-12,
        'require_full_span': False,
    }

    def execute(self) -> None:
        kind = self.options.get('kind')
        if kind not in KINDS:
            raise ConfigError(f"Unknown traveling-wave kind '{kind}'. Available: {', '.join(KINDS)}")
        entry = self.model()
        w = self.number('w')
        start = self.numbers('start')
        xi_span = self.numbers('xi_span')
        if len(xi_span) != 2 or xi_span[1] <= xi_span[0]:
            raise ConfigError("'xi_span' must be [start, end] with end > start")
        step = self.number('output_step', 0.0, strict=True)
        rtol = self.number('rtol', 0.0, strict=True)
        atol = self.number('atol', 0.0, strict=True)
        params = entry.params
        info: Dict[str, Any] = {'kind': kind, 'w': w, 'start': start, 'model': entry.name}

        try:
            if kind == 'inviscid':
                problem = TravelingWaveProblem(entry.spec.inviscid(), w)
                traj = tw_inviscid(problem, start, xi_span, rtol, atol)
                classification = inviscid_classification(problem)
                info['period'] = self._orbit_period(inviscid_vector_field(problem), start, xi_span[1], rtol, atol)
            elif kind == 'viscous':
                nu = params.get('nu', 0.0)
                if not nu:
                    raise ConfigError("The viscous traveling wave needs nu > 0; use kind 'inviscid' for nu = 0")
                padded = (list(start) + [0.0, 0.0, 0.0])[:3]
                traj = tw_viscous_coldplasma(nu, w, *padded, xi_span=xi_span, rtol=rtol, atol=atol)
                classification = linearized_tw_roots(COLD_PLASMA_VISCOUS, {'nu': nu}, w)
            elif kind == 'stratified':
                nu, kappa = params.get('nu', 0.0), params.get('kappa', 0.0)
                traj = tw_stratified(nu, kappa, w, start, xi_span, rtol, atol)
                classification = linearized_tw_roots(STRATIFIED, {'nu': nu, 'kappa': kappa}, w)
            else:
                traj, classification = self._bloodflow(entry, w, start, xi_span, rtol, atol, info)
        except ConfigError:
            raise
        except ValueError as e:
            raise ConfigError(f"Invalid traveling-wave setup: {e}") from e

        info['classification'] = classification.to_dict()
        info.update(summary(traj))
        self._write(kind, traj, step, info)

        self.stats = {
            'kind': kind,
            'classification': classification.kind,
            'termination': traj.termination.value,
            'xi_end': traj.final_param,
            'accepted_steps': traj.accepted_steps,
            'rejected_steps': traj.rejected_steps,
        }
        if self.options.get('require_full_span') and not traj.reached_end:
            raise NumericalError(
                f"Traveling wave stopped at xi={traj.final_param:.6g} ({traj.termination.value}) "
                f"before the end of the requested span {xi_span[1]}"
            )

    def _orbit_period(self, rhs, start, xi_max: float, rtol: float, atol: float) -> Optional[float]:
        try:
            return closed_orbit_period(rhs, start, xi_max, rtol, atol).period
        except NumericalError as e:
            logger.info(f"No closed orbit: {e}")
            return None

    def _bloodflow(self, entry, w, start, xi_span, rtol, atol, info):
        if entry.name != 'blood_flow':
            raise ConfigError(f"kind 'bloodflow' needs model 'blood_flow', got '{entry.name}'")
        if len(start) != 2:
            raise ConfigError("Blood-flow start must be [E, V]")
        mu, S0 = entry.params['mu'], entry.params['S0']
        p0 = PhasePoint(start[0], start[1])
        classification = bloodflow_classify(mu, S0, w)
        traj = bloodflow_orbit(mu, S0, w, p0, xi_span, rtol, atol)

        Psi0 = bloodflow_psi(mu, S0, w, p0)
        psi = [bloodflow_psi(mu, S0, w, PhasePoint(*state)) for state in traj.states]
        info['psi0'] = Psi0
        info['psi_drift'] = float(np.max(np.abs(np.asarray(psi) - Psi0)))

        info['period_quadrature'] = None
        info['period_integration'] = None
        if classification.periodic:
            try:
                info['period_quadrature'] = bloodflow_period(mu, S0, w, p0)
            except (ValueError, NumericalError) as e:
                logger.info(f"Quadrature period unavailable: {e}")
            try:
                info['period_integration'] = bloodflow_orbit_period(mu, S0, w, p0, xi_span[1]).period
            except NumericalError as e:
                logger.info(f"Orbit does not close within xi={xi_span[1]}: {e}")
        info['period'] = info['period_quadrature'] or info['period_integration']
        return traj, classification

    def _write(self, kind: str, traj: OdeTrajectory, step: float, info: Dict[str, Any]) -> None:
        lo, hi = traj.params[0], traj.final_param
        xi = np.append(np.arange(lo, hi, step), hi) if hi > lo else np.array([lo])
        states = traj.sample(xi)
        names = STATE_NAMES[kind] or [f"V{i + 1}" for i in range(states.shape[1])]
        header = ['xi'] + names
        self.writer.write_csv(self.csv_name, header, ([x] + list(s) for x, s in zip(xi, states)))
        self.writer.write_report(self.report_name, info)
