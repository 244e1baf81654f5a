//! Acceptance criteria. Runs every check, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::f64::consts::LOG2_E;
use std::process::ExitCode;
use std::time::Instant;

use cisc_core::code::{encode, registered_codes, xor, BitVector, GeneratorMatrix};
use cisc_core::mi::{
    bpsk_mi, constellation_mi, low_snr_slope, mi_monte_carlo, qpsk_mi, subadditivity_audit,
    Constellation, DEFAULT_SLOPE_PROBE,
};
use cisc_core::modem::{build_parity, RhombicConstellation, RhombicPoint};
use cisc_core::rates::{rate_delta, rate_total, sweep, GridSpec};
use cisc_core::sim::{simulate, ModeKind, SimConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: String) -> Check {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// 1. Noiseless and genie roundtrips recover every source exactly.
fn noiseless_and_genie_roundtrip() -> Check {
    let mut lines = Vec::new();
    for code in registered_codes() {
        for (mode, sigma2) in [(ModeKind::Hard, 0.0), (ModeKind::Genie, 1.0)] {
            let cfg = SimConfig {
                code12: code.name().into(),
                code3: code.name().into(),
                sigma2_per_dim: sigma2,
                blocks: 4,
                frames: 1_000,
                mode,
                seed: 101,
                ..Default::default()
            };
            let r = simulate(&cfg).map_err(|e| e.to_string())?;
            if r.total_bit_errors() != 0 || r.frames != 1_000 {
                return Err(format!(
                    "{} {:?}: {} bit errors",
                    code.name(),
                    mode,
                    r.total_bit_errors()
                ));
            }
            lines.push(format!("{}/{:?}", code.name(), mode));
        }
    }
    Ok(format!(
        "0 bit errors over 1000 triples each: {}",
        lines.join(", ")
    ))
}

/// 2. Adjacent distances 2α, mean energy 2α².
fn rhombic_geometry() -> Check {
    use RhombicPoint::*;
    let d = RhombicConstellation::squared_distance_units;
    let exact_adjacent = [(X1, X2), (X2, X3), (X3, X4), (X4, X1)]
        .iter()
        .all(|&(a, b)| d(a, b) == 4);
    let exact_matrix = [[0, 4, 12, 4], [4, 0, 4, 4], [12, 4, 0, 4], [4, 4, 4, 0]];
    let matrix_ok = RhombicPoint::ALL.iter().enumerate().all(|(i, a)| {
        RhombicPoint::ALL
            .iter()
            .enumerate()
            .all(|(j, b)| d(*a, *b) == exact_matrix[i][j])
    });
    let energy_ok = RhombicConstellation::mean_energy_units() == (8, 4);
    let mut numeric_ok = true;
    for alpha in [0.3, 1.0, 1.7, 12.5] {
        let c = RhombicConstellation::new(alpha).unwrap();
        let m = c.distance_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let want = alpha * (exact_matrix[i][j] as f64).sqrt();
                numeric_ok &= (x - want).abs() <= 1e-12 * alpha;
            }
        }
        numeric_ok &= (c.mean_energy() - 2.0 * alpha * alpha).abs() <= 1e-12 * alpha * alpha;
        numeric_ok &= (c.as_constellation().mean_energy() - 2.0 * alpha * alpha).abs()
            <= 1e-12 * alpha * alpha;
    }
    ensure(
        exact_adjacent && matrix_ok && energy_ok && numeric_ok,
        "squared distances in α² units [[0,4,12,4],[4,0,4,4],[12,4,0,4],[4,4,4,0]], mean energy 8/4 α²".into(),
    )
}

/// 3. |qpsk_mi(2ρ) - 2·bpsk_mi(ρ)| ≤ 1e-9 on 20 log-spaced ρ in [1e-3, 1e3].
fn qpsk_bpsk_identity() -> Check {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let rho = 10f64.powf(-3.0 + 6.0 * i as f64 / 19.0);
        let d = qpsk_mi(2.0 * rho).unwrap().value - 2.0 * bpsk_mi(rho).unwrap().value;
        worst = worst.max(d.abs());
    }
    ensure(
        worst <= 1e-9,
        format!("max deviation {worst:.3e} (tolerance 1e-9)"),
    )
}

/// 4. Quadrature within 3 standard errors of 1e6-trial Monte Carlo.
fn quadrature_vs_monte_carlo() -> Check {
    let snrs = [0.1, 0.5, 1.0, 2.0, 5.0];
    let rhombic = RhombicConstellation::new(1.0).unwrap().as_constellation();
    let alphabets: [(&str, Constellation); 3] = [
        ("bpsk", Constellation::bpsk(1.0).unwrap()),
        ("qpsk", Constellation::qpsk(1.0).unwrap()),
        ("rhombic", rhombic),
    ];
    let mut worst = 0.0f64;
    let mut seed = 4_000;
    for (name, c) in &alphabets {
        let energy = c.mean_energy();
        for &g in &snrs {
            let sigma_n2 = energy / g;
            let quad = constellation_mi(c, sigma_n2).unwrap().value;
            let mc = mi_monte_carlo(c, sigma_n2, 1_000_000, seed).unwrap();
            seed += 1;
            let z = (quad - mc.value).abs() / mc.std_error;
            worst = worst.max(z);
            if z > 3.0 {
                return Err(format!(
                    "{name} at SNR {g}: quadrature {quad:.6} vs {:.6} ± {:.2e}",
                    mc.value, mc.std_error
                ));
            }
        }
    }
    Ok(format!(
        "15 comparisons, worst |Δ|/se = {worst:.2} (limit 3)"
    ))
}

/// 5. Low-SNR slopes: qpsk → log2 e, rate_total → (7/5) log2 e, within 1%.
fn low_snr_slopes() -> Check {
    let q = low_snr_slope(|r| Ok(qpsk_mi(r)?.value), DEFAULT_SLOPE_PROBE).unwrap();
    let t = low_snr_slope(rate_total, DEFAULT_SLOPE_PROBE).unwrap();
    let eq = (q / LOG2_E - 1.0).abs();
    let et = (t / (1.4 * LOG2_E) - 1.0).abs();
    ensure(
        eq < 0.01 && et < 0.01,
        format!(
            "qpsk {q:.6} (rel err {eq:.2e}), rate_total {t:.6} vs {:.6} (rel err {et:.2e})",
            1.4 * LOG2_E
        ),
    )
}

/// 6. On the default grid: delta > 0 inside, ≤ 1e-6 at both ends.
fn gain_shape_on_default_grid() -> Check {
    let curve = sweep(&GridSpec::default_linear()).unwrap();
    let n = curve.points.len();
    let interior_ok = curve.points[1..n - 1].iter().all(|p| p.delta > 0.0);
    let first = curve.points[0].delta;
    let last = curve.points[n - 1].delta;
    let (lo, hi) = curve.delta_range();
    ensure(
        interior_ok && first.abs() <= 1e-6 && last.abs() <= 1e-6 && rate_delta(0.0).unwrap() == 0.0,
        format!(
            "{} points, delta range [{lo:.3e}, {hi:.4}], endpoints {first:.1e} / {last:.1e}",
            n
        ),
    )
}

/// 7. N_T/N over 1e4 random codeword pairs with N = 1e4.
fn frame_accounting() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7_000);
    let n = 10_000usize;
    let pairs = 10_000usize;
    let mut n_total = 0u64;
    for _ in 0..pairs {
        let v1 = BitVector::random(n, &mut rng);
        let v2 = BitVector::random(n, &mut rng);
        let m = build_parity(&v1, &v2).unwrap().mprime.len();
        n_total += (n + m.div_ceil(2)) as u64;
    }
    let ratio = n_total as f64 / (n * pairs) as f64;
    ensure(
        (1.24..=1.26).contains(&ratio),
        format!("N_T/N = {ratio:.5} (allowed [1.24, 1.26])"),
    )
}

/// 8. encode(c1 ⊕ c2) = encode(c1) ⊕ encode(c2).
fn linearity() -> Check {
    let g = GeneratorMatrix::hamming74();
    let bits = |m: u32| BitVector::new((0..4).map(|i| ((m >> i) & 1) as u8).collect()).unwrap();
    for a in 0..16 {
        for b in 0..16 {
            let (c1, c2) = (bits(a), bits(b));
            if encode(&g, &xor(&c1, &c2).unwrap()).unwrap()
                != xor(&encode(&g, &c1).unwrap(), &encode(&g, &c2).unwrap()).unwrap()
            {
                return Err(format!("Hamming(7,4) fails at ({a}, {b})"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8_000);
    let k = 48;
    let rows = (0..k)
        .map(|i| {
            let mut row: Vec<u8> = (0..k).map(|j| u8::from(i == j)).collect();
            row.extend(BitVector::random(48, &mut rng).into_inner());
            row
        })
        .collect();
    let big = GeneratorMatrix::new(rows).unwrap();
    for _ in 0..10_000 {
        let c1 = BitVector::random(k, &mut rng);
        let c2 = BitVector::random(k, &mut rng);
        if encode(&big, &xor(&c1, &c2).unwrap()).unwrap()
            != xor(&encode(&big, &c1).unwrap(), &encode(&big, &c2).unwrap()).unwrap()
        {
            return Err("random (96,48) code fails".into());
        }
    }
    Ok("Hamming(7,4) all 256 pairs, random (96,48) code 1e4 pairs".into())
}

/// 9. bpsk_mi(γ) < bpsk_mi(fγ) + bpsk_mi((1-f)γ).
fn subadditivity() -> Check {
    let mut min_gap = f64::INFINITY;
    for f in [0.3, 0.5, 0.7] {
        for g in [0.5, 2.0, 10.0] {
            let r = subadditivity_audit(g, f).unwrap();
            if !r.holds {
                return Err(format!("fails at γ={g}, f={f}: {} vs {}", r.lhs, r.rhs));
            }
            min_gap = min_gap.min(r.rhs - r.lhs);
        }
    }
    Ok(format!("9 cases hold, smallest margin {min_gap:.4} bits"))
}

/// 10. d_min/(2σ) = 6: no step-1 symbol errors over ≥ 1e5 symbols.
fn hard_decision_sanity() -> Check {
    let alpha = 1.0;
    let sigma = 2.0 * alpha / (2.0 * 6.0);
    let cfg = SimConfig {
        alpha,
        sigma2_per_dim: sigma * sigma,
        blocks: 1_000,
        frames: 15,
        mode: ModeKind::Hard,
        seed: 10_000,
        ..Default::default()
    };
    let r = simulate(&cfg).map_err(|e| e.to_string())?;
    ensure(
        r.step1_symbols >= 100_000 && r.step1_symbol_errors == 0,
        format!(
            "{} step-1 symbols, {} symbol errors, {} step-2 branch errors, {} decoded bit errors",
            r.step1_symbols,
            r.step1_symbol_errors,
            r.step2_branch_errors,
            r.total_bit_errors()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "AC1 noiseless/genie roundtrip",
            noiseless_and_genie_roundtrip,
        ),
        ("AC2 rhombic geometry and energy", rhombic_geometry),
        ("AC3 qpsk(2ρ) = 2·bpsk(ρ)", qpsk_bpsk_identity),
        ("AC4 quadrature vs Monte Carlo", quadrature_vs_monte_carlo),
        ("AC5 low-SNR slopes", low_snr_slopes),
        ("AC6 rate gain shape", gain_shape_on_default_grid),
        ("AC7 frame accounting", frame_accounting),
        ("AC8 linearity", linearity),
        ("AC9 subadditivity", subadditivity),
        ("AC10 hard-decision sanity", hard_decision_sanity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "[{tag}] {name}: {detail} ({:.2}s)",
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
