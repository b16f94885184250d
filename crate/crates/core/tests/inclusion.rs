//! Every eigenvalue of a finite sign matrix lies in the spectrum of a
//! periodic sign operator. For subdiagonal `k` of length `n` a suitable
//! period is `2n + 4`, with pattern `(k, a, b, reverse(k), c, d)` for some
//! signs `a, b, c, d`; shorter periods do not suffice in general.

use sign_spectra::{ensure_even_parity, finite_eigenvalues, symbol_poly, Sign, SignVector, C64};

fn reflected(k: &SignVector, pad: u64) -> SignVector {
    let s = |bit: u64| if pad >> bit & 1 == 1 { Sign::Minus } else { Sign::Plus };
    let mut v: Vec<Sign> = k.iter().collect();
    v.extend([s(0), s(1)]);
    v.extend(k.reversed().iter());
    v.extend([s(2), s(3)]);
    ensure_even_parity(&SignVector::new(v).unwrap())
}

/// `p(z)` real and in `[-2, 2]`, relative to the evaluation scale.
fn on_periodic_spectrum(pattern: &SignVector, z: C64) -> bool {
    let sp = symbol_poly::<f64>(pattern).unwrap();
    let (v, scale) = sp.p.evaluate(z);
    let slack = 1e-9 * scale.max(1.0);
    v.im.abs() <= slack && v.re.abs() <= 2.0 + slack
}

#[test]
fn finite_eigenvalues_lie_on_reflected_periodic_spectra() {
    for n in 1..=6 {
        for mask in 0..1u64 << n {
            let k = SignVector::from_mask(mask, n);
            let patterns: Vec<SignVector> = (0..16).map(|pad| reflected(&k, pad)).collect();
            for z in finite_eigenvalues::<f64>(&k, 1e-10).unwrap().values() {
                assert!(
                    patterns.iter().any(|c| on_periodic_spectrum(c, z)),
                    "k={k} z={z} not on any reflected periodic spectrum"
                );
            }
        }
    }
}

#[test]
fn period_n_plus_one_is_not_enough() {
    // k = (+,-,+,+,+,+): the eigenvalue near -0.8425 + 0.3598i lies on no
    // periodic spectrum of period <= 7 (with parity doubling, <= 14)
    let k: SignVector = "+-++++".parse().unwrap();
    let z = finite_eigenvalues::<f64>(&k, 1e-10)
        .unwrap()
        .values()
        .into_iter()
        .find(|z| (z - C64::new(-0.8425, 0.3598)).norm() < 1e-3)
        .unwrap();
    for m in 1..=7 {
        for mask in 0..1u64 << m {
            let c = ensure_even_parity(&SignVector::from_mask(mask, m));
            assert!(!on_periodic_spectrum(&c, z), "unexpected hit for c={c}");
        }
    }
    assert!((0..16).any(|pad| on_periodic_spectrum(&reflected(&k, pad), z)));
}
