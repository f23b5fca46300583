"""clusternet

Interference, outage, clustering gain and transmission capacity of wireless
networks whose transmitters form Neyman-Scott cluster processes (Thomas and
Matern), with a Monte Carlo oracle for every analytic quantity.

Public API surface:
- clusternet.cli.main : CLI entrypoint
- clusternet.metrics : analytic success, bounds, gain and capacity
- clusternet.montecarlo : simulators and empirical distributions
- clusternet.pgfl : quadrature engine and generating functionals
- clusternet.experiments : experiment kinds and the runner
"""
__all__ = ["__version__"]
__version__ = "0.1.0"
