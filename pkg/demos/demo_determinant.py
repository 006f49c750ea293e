"""Genus-2 octagon surface: length spectrum, zeta factors, and two routes to log det.

The spectrum is enumerated from the octagon group up to length 6 and then
fed to the closed-form assembly (Selberg zeta, identity factor, constant)
and to the heat-trace quadrature.  The two routes must cancel.

    python3 demos/demo_determinant.py
"""
import warnings
from pathlib import Path

from orbizeta import heattrace as ht
from orbizeta import zetafactors as zf
from orbizeta.errors import DiscretenessWarning
from orbizeta.geodesics import generate_spectrum, load_group, systole
from orbizeta.orbifold import OrbifoldSignature, RepresentationData

DATA = Path(__file__).resolve().parent / "data"


def main():
    sig = OrbifoldSignature(2, ())
    rep = RepresentationData.trivial(sig)
    with warnings.catch_warnings():
        # the octagon surface has many equal lengths between non-conjugate classes
        warnings.simplefilter("ignore", DiscretenessWarning)
        spec = generate_spectrum(load_group(DATA / "octagon_group.json"), 6.0, audit_margin=2)
    print(f"records below 6: {len(spec)}, systole {systole(spec):.12f}")
    for r in spec:
        print(f"  length {r.length:.12f}  power {r.n_gamma}  classes {r.class_count}")

    print(f"\ntorsion factor {zf.torsion_factor(sig, rep):.10f}, "
          f"determinant constant {zf.determinant_constant(sig, rep):.10f}")
    print("\n    s     log Z        log Z_I        log det      heat route + log det")
    for s in (3.0, 5.0, 8.0):
        b = zf.log_det(s, sig, rep, spec)
        lm = ht.lm_log_det_numeric(s, sig, rep, spec)
        print(f"  {s:4.1f} {b.log_z.real: .6e} {b.log_z_identity.real: .6e} {b.log_det.real: .6e} "
              f"{abs(lm.value + b.log_det):.2e} (budget {lm.abs_err + b.abs_err:.1e})")
    # the Euler product carries every power of a stored primitive, the heat
    # route only the stored records; the gap is the powers beyond length 6
    print("\nthe heat route only sees records up to length 6; the mismatch at s = 3 sits inside the "
          f"truncation tail estimate {zf.log_selberg_zeta(3.0, spec)[1]:.1e}")


if __name__ == "__main__":
    main()
