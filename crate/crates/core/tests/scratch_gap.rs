//! Throwaway landscape probe (deleted before release): measures the weighted
//! block levels of exact stationary coupled OU differences under two
//! reference-noise-band schemes.

use num_complex::Complex64;
use phi4_core::field::SpectralField;
use phi4_core::grid::neg;
use phi4_core::para::{block_lp_norms, DyadicPartition};
use phi4_core::stoch::{NoiseSource, StreamTag};
use phi4_core::symbols::{lambda, Variant};

const AMP: f64 = 0.353_553_390_593_273_73; // 2^{-3/2}
const Z: f64 = 0.6;

fn set_pair(f: &mut SpectralField, k: [i64; 3], v: Complex64) {
    f.set(k, v).unwrap();
    f.set(neg(k), v.conj()).unwrap();
}

/// Exact stationary coupled pair: lattice-band-`n_lat` OU vs Galerkin OU with
/// noise band `noise_band`, driven by the same unit-intensity noise on shared
/// modes (cross-covariance 1/(l1+l2)).
fn coupled_stationary(
    n_lat: i64,
    noise_band: i64,
    master: u64,
    replica: u64,
) -> (SpectralField, SpectralField) {
    let band = noise_band.max(n_lat);
    let mut src1 = NoiseSource::new(band, master, replica, StreamTag::OuInit).unwrap();
    let mut src2 = NoiseSource::new(band, master, replica, StreamTag::OuNoise).unwrap();
    let mut extra = std::collections::HashMap::new();
    src2.for_each_pair(|k, x, y| {
        extra.insert(k, Complex64::new(x, y));
    });

    // Reference first (realization independent of n_lat, as in a shared-CRN
    // run), lattice conditioned on it so the joint per-mode law is exact.
    let mut lat = SpectralField::zero(n_lat.max(1)).unwrap();
    let mut gal = SpectralField::zero(noise_band).unwrap();
    src1.for_each_pair(|k, x, y| {
        let g1 = Complex64::new(x, y);
        let in_lat = k.iter().all(|&kj| kj.abs() <= n_lat);
        let in_gal = k.iter().all(|&kj| kj.abs() <= noise_band);
        let l2 = lambda(Variant::Galerkin, band, k);
        let v2 = 1.0 / (2.0 * l2);
        let a2 = (v2 / 2.0).sqrt() * g1;
        if in_gal {
            set_pair(&mut gal, k, AMP * a2);
        }
        if in_lat {
            let l1 = lambda(Variant::Lattice, n_lat, k);
            let v1 = 1.0 / (2.0 * l1);
            let a1 = if in_gal {
                let c = 1.0 / (l1 + l2);
                let resid = (v1 - c * c / v2).max(0.0);
                (c / v2) * a2 + (resid / 2.0).sqrt() * extra[&k]
            } else {
                (v1 / 2.0).sqrt() * g1
            };
            set_pair(&mut lat, k, AMP * a1);
        }
    });
    (lat, gal)
}

fn weighted_levels(u: &SpectralField, part: &DyadicPartition) -> Vec<(i32, f64)> {
    block_lp_norms(u, f64::INFINITY, part, 2.0)
        .unwrap()
        .into_iter()
        .map(|(j, lp)| (j, 2f64.powf(-Z * j as f64) * lp))
        .collect()
}

fn median(v: &mut Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

/// Full nonlinear mini convergence study: real coupled runs at a coarse dt,
/// few seeds, to see whether the sup-error medians decrease in N.
#[test]
#[ignore]
fn mini_convergence() {
    use phi4_core::dynamics::{run_coupled, CoupledConfig};
    use phi4_core::stoch::QuadSpec;

    let cfg = CoupledConfig {
        n_list: vec![2, 4, 8],
        n_ref: 16,
        t_final: 0.1,
        dt: 1e-3,
        z: Z,
        threshold: 50.0,
        norm_every: 10,
        init_band: 2,
        oversample: 2.0,
    };
    let consts = cfg.build_tables(&QuadSpec::default()).unwrap();
    let mut sups: Vec<Vec<f64>> = vec![Vec::new(); cfg.n_list.len()];
    for replica in 0..5u64 {
        let t0 = std::time::Instant::now();
        let run = run_coupled(&cfg, &consts, 2026, replica).unwrap();
        println!(
            "replica {replica}: sup {:?} stops {:?} top-shell {:.2e} ({:.1}s)",
            run.sup_error,
            run.stop_times,
            run.top_shell_max,
            t0.elapsed().as_secs_f64()
        );
        for (i, &s) in run.sup_error.iter().enumerate() {
            sups[i].push(s);
        }
    }
    for (i, n) in cfg.n_list.iter().enumerate() {
        println!("N={n}: median sup {:.4}", median(&mut sups[i]));
    }
}

/// Exact per-block second moments E|Δ_q(u1 - u1_ref)(x)|² for lattice-N vs
/// Galerkin-N_ref coupled pairs, stationary and t = 0.5 from shared start.
#[test]
#[ignore]
fn block_variance_exact() {
    let n_ref = 32i64;
    let part = DyadicPartition::build(n_ref).unwrap();
    for &t in &[f64::INFINITY, 0.5] {
        println!("--- per-block E|diff|^2, t = {t} ---");
        for n in [4i64, 8, 16, 32] {
            let mut per_block = vec![0.0f64; (part.jmax() + 2) as usize];
            for k in phi4_core::grid::iter_band(n_ref) {
                if k == [0, 0, 0] {
                    continue;
                }
                let l2 = lambda(Variant::Galerkin, n_ref, k);
                let dv = if k.iter().all(|&kj| kj.abs() <= n) {
                    let l1 = lambda(Variant::Lattice, n, k);
                    if t.is_finite() {
                        (1.0 - (-2.0 * l1 * t).exp()) / (2.0 * l1)
                            + (1.0 - (-2.0 * l2 * t).exp()) / (2.0 * l2)
                            - 2.0 * (1.0 - (-(l1 + l2) * t).exp()) / (l1 + l2)
                    } else {
                        1.0 / (2.0 * l1) + 1.0 / (2.0 * l2) - 2.0 / (l1 + l2)
                    }
                } else if t.is_finite() {
                    (1.0 - (-2.0 * l2 * t).exp()) / (2.0 * l2)
                } else {
                    1.0 / (2.0 * l2)
                };
                for j in part.blocks() {
                    let w = part.block_weight(j, k).unwrap();
                    if w != 0.0 {
                        per_block[(j + 1) as usize] += w * w * dv / 8.0;
                    }
                }
            }
            print!("N={n:2}: ");
            for (idx, v) in per_block.iter().enumerate() {
                if *v > 0.0 {
                    print!("q={} {:.4e}  ", idx as i32 - 1, v);
                }
            }
            println!();
        }
    }
}

#[test]
#[ignore]
fn landscape_probe() {
    let part = DyadicPartition::build(48).unwrap();
    let reps: u64 = 12;
    let master = 77;
    let n_ref = 16;

    // Pure reference level curve (noise band 16).
    {
        let mut per_block: Vec<Vec<f64>> = vec![Vec::new(); 8];
        for r in 0..reps {
            let (_, gal) = coupled_stationary(1, n_ref, master, r);
            for (j, w) in weighted_levels(&gal, &part) {
                let idx = (j + 1) as usize;
                if idx < per_block.len() {
                    per_block[idx].push(w);
                }
            }
        }
        print!("pure gal(16) levels: ");
        for (idx, vals) in per_block.iter_mut().enumerate() {
            if !vals.is_empty() {
                print!("j={} {:.3}  ", idx as i32 - 1, median(vals));
            }
        }
        println!();
    }

    for scheme in ["A", "B"] {
        println!("--- scheme {scheme} (A: noise band = N, B: noise band = 16) ---");
        for n in [2i64, 4, 8, 16] {
            let noise_band = if scheme == "A" { n } else { n_ref };
            let mut sups = Vec::new();
            let mut per_block: Vec<Vec<f64>> = vec![Vec::new(); 8];
            for r in 0..reps {
                let (lat, gal) = coupled_stationary(n, noise_band, master, r);
                let diff = lat.add_scaled(&gal, Complex64::new(-1.0, 0.0)).unwrap();
                let levels = weighted_levels(&diff, &part);
                let sup = levels.iter().fold(0.0f64, |m, &(_, w)| m.max(w));
                for (j, w) in &levels {
                    let idx = (j + 1) as usize;
                    if idx < per_block.len() {
                        per_block[idx].push(*w);
                    }
                }
                sups.push(sup);
            }
            print!("N={n:2} median sup {:.3} | blocks: ", median(&mut sups));
            for (idx, vals) in per_block.iter_mut().enumerate() {
                if !vals.is_empty() {
                    print!("j={} {:.3}  ", idx as i32 - 1, median(vals));
                }
            }
            println!();
        }
    }
}
