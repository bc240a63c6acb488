"""Simulation and limit-law numerics for the ASEP and the stochastic six-vertex model.

Subpackage map:

* ``scaling``  -- parameter bundles and closed-form centering/scale constants
* ``hsvm``     -- general higher-spin vertex-model sampler (sparse row sweeps)
* ``sixvertex``-- spin-1/2 specialization, boundary-bit sampler, batch engine
* ``asep``     -- continuous-time exclusion process, currents, degeneration
* ``qmoment``  -- contour-integral q-moments + exhaustive enumeration oracle
* ``fredholm`` -- ray contours and the Nystrom Fredholm-determinant engine
* ``limits``   -- Tracy-Widom / spiked-crossover / finite-GUE distributions
* ``harness``  -- Monte Carlo experiment driver, KS statistics, persistence
* ``cli``      -- command-line interface (simulate / moments / dist / experiment / check)
"""

__version__ = "0.1.0"

from . import scaling  # noqa: F401
