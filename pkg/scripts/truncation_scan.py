"""How the displacement-vs-direct fidelity and the first dropped coefficient
depend on the Fock truncation, for both catalogued parameter sets."""
import argparse

import numpy as np

from hypercs.algebra import build_structure, displace_vacuum, tail_bound
from hypercs.specfun import ModelParams
from hypercs.states import make_state

PARAMS = {"canonical": ModelParams((), ()), "two_level": ModelParams((1.0,), (1.5,))}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--z", type=complex, default=2.0)
    parser.add_argument("--n-max", type=int, nargs="+", default=[5, 10, 20, 30, 40, 60])
    args = parser.parse_args()

    print(f"{'params':>10} {'n_max':>5} {'tail':>10} {'infidelity':>11} {'norm deficit':>12}")
    for name, params in PARAMS.items():
        for n_max in args.n_max:
            table = build_structure(params, n_max)
            direct = make_state(table, args.z)
            displaced = displace_vacuum(table, args.z, tol=None)
            full = make_state(table, args.z, truncate_norm=False)
            infid = 1 - abs(np.vdot(direct.coeffs, displaced.coeffs))
            deficit = 1 - float(np.sum(full.probabilities))
            print(f"{name:>10} {n_max:5d} {tail_bound(table, args.z):10.2e} "
                  f"{infid:11.2e} {deficit:12.2e}")


if __name__ == "__main__":
    main()
