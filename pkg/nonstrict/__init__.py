"""Analysis toolkit for non-strictly hyperbolic systems V_t + V_1 V_x = QV."""

__version__ = '0.1.0'
