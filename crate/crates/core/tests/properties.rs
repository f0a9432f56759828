mod common;

use common::*;
use proptest::prelude::*;
use qss_core::analytics::{
    binary_entropy, dw_lower_bound, holevo_dishonest_exact, holevo_trusted_exact, holevo_upper_bound,
    mutual_info_key, regroup_for_dishonest, tau, tau_partials, tau_tilde, KeyRateReport,
};
use qss_core::depolarization::{depolarize_channel, ghz_delta, ghz_project};
use qss_core::postprocessing::{key_length, privacy_amplify, reconcile};
use qss_core::protocol::{compute_sn, solve_q};
use qss_core::quantum::{
    ghz_basis_vector, ghz_diagonal_density, joint_outcome_distribution, partial_trace, purify, BasisChoice,
    DensityMatrix, GhzSpectrum, RoundRecord, Sign, PSD_TOL,
};
use qss_core::rng::stream;

fn spectrum_strategy() -> impl Strategy<Value = GhzSpectrum> {
    (3usize..=5).prop_flat_map(|n| {
        let len = (1usize << (n - 1)) + 1;
        prop::collection::vec(0.0f64..1.0, len).prop_filter_map("degenerate", move |raw| {
            let total = raw[0] + raw[1] + 2.0 * raw[2..].iter().sum::<f64>();
            (total > 1e-6).then(|| {
                let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
                GhzSpectrum::with_tolerance(n, w[0], w[1], w[2..].to_vec(), 1e-9).unwrap()
            })
        })
    })
}

/// Spectra above the threshold: a random spectrum mixed toward `|Psi_0^+>`.
fn secure_spectrum_strategy() -> impl Strategy<Value = GhzSpectrum> {
    (spectrum_strategy(), 0.0f64..1.0).prop_filter_map("below threshold", |(s, t)| {
        let t = 0.75 + 0.25 * t;
        let mixed = GhzSpectrum::with_tolerance(
            s.n_players(),
            t + (1.0 - t) * s.lambda0_plus(),
            (1.0 - t) * s.lambda0_minus(),
            s.lambda().iter().map(|w| (1.0 - t) * w).collect(),
            1e-9,
        )
        .unwrap();
        (mixed.delta() > solve_q()).then_some(mixed)
    })
}

fn bits(len: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_normalised(s in spectrum_strategy()) {
        let total = s.lambda0_plus() + s.lambda0_minus() + 2.0 * s.lambda().iter().sum::<f64>();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(s.components().all(|(_, _, w)| w >= 0.0));
    }

    #[test]
    fn ghz_vectors_have_two_entries(n in 3usize..=6, j_raw in 0usize..32, minus in any::<bool>()) {
        let j = j_raw % (1 << (n - 1));
        let sign = if minus { Sign::Minus } else { Sign::Plus };
        let v = ghz_basis_vector(n, j, sign).unwrap();
        let amps = v.amplitudes();
        prop_assert!((amps.norm_squared() - 1.0).abs() < 1e-12);
        let nonzero: Vec<usize> = (0..amps.len()).filter(|&i| amps[i].norm() > 0.0).collect();
        prop_assert_eq!(nonzero, vec![j, (1 << n) - 1 - j]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        prop_assert!((amps[(1 << n) - 1 - j].re - sign.factor() * r).abs() < 1e-15);
    }

    #[test]
    fn diagonal_density_is_a_state(s in spectrum_strategy()) {
        let rho = ghz_diagonal_density(&s);
        prop_assert!(rho.validate().is_ok());
        let m = rho.entries();
        prop_assert!((m - m.adjoint()).camax() < 1e-12);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&e| e >= -PSD_TOL));
        let oracle = density(&components(&s));
        prop_assert!((m - oracle).camax() < 1e-12);
    }

    #[test]
    fn even_y_parity_bias_is_delta(s in spectrum_strategy(), mask_raw in 0usize..64) {
        let n = s.n_players();
        let head = mask_raw % (1 << (n - 1));
        let mask = (head << 1) | (head.count_ones() as usize & 1);
        let bases = BasisChoice::from_y_mask(n, mask);
        let dist = joint_outcome_distribution(&s, &bases).unwrap();
        let k = bases.y_count();
        let target = usize::from(k % 4 == 2);
        let bias: f64 = dist
            .iter()
            .enumerate()
            .map(|(m, p)| if (m.count_ones() as usize) % 2 == target { *p } else { -*p })
            .sum();
        prop_assert!((bias - s.delta()).abs() < 1e-12);
        let oracle = distribution(&density(&components(&s)), &(0..n).map(|i| xy(bit(n, mask, i) == 1)).collect::<Vec<_>>());
        prop_assert!(dist.iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-12));
    }

    #[test]
    fn purification_traces_back(s in spectrum_strategy()) {
        let n = s.n_players();
        let psi = purify(&s).to_density();
        let reduced = partial_trace(&psi, &[1 << n, 1 << n], &[0]).unwrap();
        prop_assert!((reduced.entries() - ghz_diagonal_density(&s).entries()).camax() < 1e-10);
    }

    #[test]
    fn depolarization_is_a_twirl(seed in any::<u64>(), n in 3usize..=4) {
        let rho = DensityMatrix::new(random_density(1 << n, &mut stream(seed, 0))).unwrap();
        let once = depolarize_channel(&rho, n).unwrap();
        let twice = depolarize_channel(&once, n).unwrap();
        prop_assert!((once.entries() - twice.entries()).camax() < 1e-12);
        prop_assert!((once.trace().re - 1.0).abs() < 1e-12);
        prop_assert!((once.entries() - once.entries().adjoint()).camax() < 1e-12);
        prop_assert!((ghz_delta(&once, n).unwrap() - ghz_delta(&rho, n).unwrap()).abs() < 1e-12);
        let proj = ghz_project(&once, n).unwrap();
        // Each j >= 1 pair has equal weights: check on the dense output directly.
        for j in 1..1usize << (n - 1) {
            let plus = ghz(n, j, false);
            let minus = ghz(n, j, true);
            let wp = (plus.adjoint() * once.entries() * &plus)[(0, 0)].re;
            let wm = (minus.adjoint() * once.entries() * &minus)[(0, 0)].re;
            prop_assert!((wp - wm).abs() < 1e-12);
            prop_assert!((wp - proj.lambda_j(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn depolarized_outcomes_hide_partial_parities(s in spectrum_strategy(), pattern_raw in 0usize..32) {
        let n = s.n_players();
        let pattern = pattern_raw % (1 << n);
        let dist = joint_outcome_distribution(&s, &BasisChoice::from_y_mask(n, pattern)).unwrap();
        for i in 0..n {
            let others: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            for subset in 1..(1usize << others.len()) - 1 {
                let mut t = vec![vec![0.0; 2]; 2];
                for (m, p) in dist.iter().enumerate() {
                    let x = others.iter().enumerate().filter(|(b, _)| (subset >> b) & 1 == 1).fold(0, |a, (_, &k)| a ^ bit(n, m, k));
                    t[bit(n, m, i)][x] += p;
                }
                prop_assert!(mutual_information(&t) < 1e-10);
            }
        }
    }

    #[test]
    fn security_report_is_consistent(outcomes in prop::collection::vec((0usize..8, 0usize..8), 1..200), q in 0.5f64..1.0) {
        let records: Vec<RoundRecord> = outcomes
            .iter()
            .map(|&(head, m)| {
                let head = head % 4;
                let mask = (head << 1) | (head.count_ones() as usize & 1);
                RoundRecord::new(BasisChoice::from_y_mask(3, mask), (0..3).map(|i| bit(3, m, i) == 1).collect()).unwrap()
            })
            .collect();
        let r = compute_sn(&records, q).unwrap();
        prop_assert_eq!(r.s_n, r.n as i64 - 2 * r.xi as i64);
        prop_assert!(r.s_n.unsigned_abs() as usize <= r.n);
        prop_assert_eq!(r.passed, r.ratio > q);
    }

    #[test]
    fn binary_entropy_is_symmetric(x in 0.0f64..=1.0) {
        let h = binary_entropy(x).unwrap();
        prop_assert!((h - binary_entropy(1.0 - x).unwrap()).abs() < 1e-12);
        prop_assert!((h - h2(x)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&h));
    }

    #[test]
    fn zeta_profile_is_normalised(s in spectrum_strategy(), k_raw in 1usize..4) {
        let n = s.n_players();
        let k = 1 + (k_raw - 1) % (n - 2);
        let z = regroup_for_dishonest(&s, k).unwrap();
        prop_assert_eq!(z.k_dishonest, k);
        prop_assert_eq!(z.zeta.len(), (1usize << (n - k - 1)) - 1);
        prop_assert!(z.zeta0_plus >= 0.0 && z.zeta0_minus >= 0.0 && z.zeta.iter().all(|&w| w >= 0.0));
        prop_assert!((z.zeta0_plus + z.zeta0_minus + 2.0 * z.zeta.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tau_partials_match_finite_differences(p in 0.8f64..0.99, u in 0.1f64..0.9, v in 0.1f64..0.9) {
        let a = 0.5 * (1.0 - p);
        let x = a * u * v;
        let y = a * u * (1.0 - v);
        let step = 1e-7 * a;
        let fd_x = (tau(x + step, y, p).unwrap() - tau(x - step, y, p).unwrap()) / (2.0 * step);
        let fd_y = (tau(x, y + step, p).unwrap() - tau(x, y - step, p).unwrap()) / (2.0 * step);
        let (dx, dy) = tau_partials(x, y, p);
        prop_assert!((fd_x - dx).abs() < 1e-6 * dx.abs().max(1.0), "{fd_x} vs {dx}");
        prop_assert!((fd_y - dy).abs() < 1e-6 * dy.abs().max(1.0), "{fd_y} vs {dy}");
    }

    #[test]
    fn key_rate_report_invariants(s in secure_spectrum_strategy()) {
        let p = s.delta();
        for k in 0..=s.n_players() - 2 {
            let r = KeyRateReport::with_dishonest(&s, k).unwrap();
            prop_assert!((r.alpha + r.beta - 1.0).abs() < 1e-15);
            prop_assert!((r.dw_exact - (r.mutual_info - r.holevo_exact)).abs() < 1e-15);
            let (a, b) = (r.alpha, r.beta);
            let lower = 1.0 + xlog(a * a) + xlog(b * b) + 2.0 * xlog(a * b);
            prop_assert!((r.dw_lower.unwrap() - lower).abs() < 1e-12);
            prop_assert!(r.holevo_exact <= r.holevo_bound.unwrap() + 1e-9);
            prop_assert!(r.dw_exact >= lower - 1e-9);
        }
        prop_assert!(mutual_info_key(p) - holevo_trusted_exact(&s) >= dw_lower_bound(p).unwrap() - 1e-9);
        prop_assert!((tau_tilde(p) - dw_lower_bound(p).unwrap()).abs() < 1e-15);
        prop_assert!(holevo_upper_bound(p).is_ok());
    }

    #[test]
    fn closed_forms_match_purification(s in spectrum_strategy()) {
        let n = s.n_players();
        let key = |m: usize| bit(n, m, 0);
        let dense = holevo(&components(&s), &vec![x_basis(); n], key, |_| 0);
        prop_assert!((dense - holevo_trusted_exact(&s)).abs() < 1e-9);
        for k in 1..=n - 2 {
            let side = |m: usize| (1..=k).fold(0, |a, i| (a << 1) | bit(n, m, i));
            let dense = holevo(&components(&s), &vec![x_basis(); n], key, side);
            let closed = holevo_dishonest_exact(&regroup_for_dishonest(&s, k).unwrap());
            prop_assert!((dense - closed).abs() < 1e-9, "k = {}: {} vs {}", k, dense, closed);
        }
        let d = distribution(&density(&components(&s)), &vec![x_basis(); n]);
        let mut t = vec![vec![0.0; 2]; 2];
        for (m, p) in d.iter().enumerate() {
            t[bit(n, m, 0)][(1..n).fold(0, |a, i| a ^ bit(n, m, i))] += p;
        }
        prop_assert!((mutual_information(&t) - mutual_info_key(s.delta())).abs() < 1e-9);
    }

    #[test]
    fn reconciliation_depends_only_on_the_error_pattern(d in bits(256), e in bits(256), mask in bits(256), seed in any::<u64>()) {
        // Sparse error pattern: roughly one flip in sixteen.
        let c: Vec<bool> = d.iter().zip(e.chunks(4).cycle().zip(&mask)).map(|(a, (es, m))| a ^ (es.iter().all(|x| *x) && *m)).collect();
        let shift = |v: &[bool]| v.iter().zip(&mask).map(|(a, b)| a ^ b).collect::<Vec<_>>();
        let r1 = reconcile(&d, &c, &mut stream(seed, 0)).unwrap();
        let r2 = reconcile(&shift(&d), &shift(&c), &mut stream(seed, 0)).unwrap();
        prop_assert_eq!(&r1.corrections, &r2.corrections);
        prop_assert_eq!(r1.parity_bits_leaked, r2.parity_bits_leaked);
        prop_assert_eq!(r1.converged, r2.converged);
        prop_assert_eq!(shift(&r1.corrected_dealer_view), r2.corrected_dealer_view);
        if r1.converged {
            prop_assert_eq!(&r1.corrected_dealer_view, &c);
        }
    }

    #[test]
    fn amplification_is_gf2_linear(a in bits(200), b in bits(200), out in 0usize..=200, seed in any::<u64>()) {
        let ab: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ka = privacy_amplify(&a, out, seed).unwrap();
        let kb = privacy_amplify(&b, out, seed).unwrap();
        let kab = privacy_amplify(&ab, out, seed).unwrap();
        let xor: Vec<bool> = ka.bits.iter().zip(&kb.bits).map(|(x, y)| x ^ y).collect();
        prop_assert_eq!(kab.bits, xor);
        prop_assert_eq!(ka.output_length, out);
        prop_assert_eq!(ka.input_length, 200);
    }

    #[test]
    fn key_length_is_monotone(p1 in 0.5f64..=1.0, p2 in 0.5f64..=1.0, n in 100usize..5000, leak in 0usize..500) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        let a = key_length(n, lo, leak, 0.05).unwrap();
        let b = key_length(n, hi, leak, 0.05).unwrap();
        prop_assert!(a <= b);
        prop_assert!(b <= n.saturating_sub(leak));
    }
}
