//! Seeded checks of the cross-norm inequalities. Each returns a description
//! of the first violation.

use crossnorm::bipartite::{
    haar_unitary, random_density, random_density_with, rng_from_seed,
    BipartiteOperator, BipartiteVector, CMatrix, Shape,
};
use crossnorm::cross_norm::{
    hermitian_upper, lower_bound_realignment, pi_bounds, upper_bound_realignment,
    upper_bound_spectral, witness_value, BoundsConfig, Certificate, StandardDecomposition,
};
use crossnorm::separability::gallery::random_separable;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::*;

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn shape_for(rng: &mut ChaCha8Rng, max: usize) -> Shape {
    Shape::new(rng.random_range(1..=max), rng.random_range(1..=max)).unwrap()
}

fn lower(d: &BipartiteOperator, seed: u64) -> f64 {
    pi_bounds(d, &fast_config(seed)).unwrap().pi_lower.value
}

fn upper(d: &BipartiteOperator, seed: u64) -> f64 {
    pi_bounds(d, &fast_config(seed)).unwrap().pi_upper.value
}

/// `‖D‖₁ ≤ π_lower ≤ π_upper ≤ H_upper ≤ 2 π_upper` and `π_upper ≤ m`.
pub fn sandwich(seed: u64, config: &BoundsConfig) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let d = random_density_with(shape, &mut rng);
    let b = pi_bounds(&d, config).map_err(|e| e.to_string())?;
    let tn = trace_norm_oracle(d.matrix());
    let (pl, pu, hu) = (b.pi_lower.value, b.pi_upper.value, b.h_upper.value);
    let tol = 1e-8;
    ensure(tn <= pl + tol, || format!("seed {seed}: trace norm {tn} > pi_lower {pl}"))?;
    ensure(pl <= pu + tol, || format!("seed {seed}: pi_lower {pl} > pi_upper {pu}"))?;
    ensure(pu <= hu + tol, || format!("seed {seed}: pi_upper {pu} > h_upper {hu}"))?;
    ensure(hu <= 2.0 * pu + tol, || format!("seed {seed}: h_upper {hu} > 2 pi_upper {pu}"))?;
    let m = shape.min_dim() as f64;
    ensure(pu <= m + tol, || format!("seed {seed}: pi_upper {pu} > m = {m}"))
}

pub fn projection(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let d = random_density_with(shape, &mut rng);
    let p = random_projection(shape.dh(), rng.random_range(1..=shape.dh()), &mut rng);
    let q = random_projection(shape.dj(), rng.random_range(1..=shape.dj()), &mut rng);
    let pq = kron(&p, &q);
    let projected = operator(shape, &pq * d.matrix() * &pq);
    let (l, u) = (lower(&projected, seed), upper(&d, seed));
    ensure(l <= u + 1e-7, || format!("seed {seed}: projected lower {l} > upper {u}"))
}

pub fn contraction(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let d = random_density_with(shape, &mut rng);
    let (dh, dj) = (shape.dh(), shape.dj());
    let left = kron(&random_contraction(dh, &mut rng), &random_contraction(dj, &mut rng));
    let right = kron(&random_contraction(dh, &mut rng), &random_contraction(dj, &mut rng));
    let moved = operator(shape, &left * d.matrix() * &right);
    let (l, u) = (lower(&moved, seed), upper(&d, seed));
    ensure(l <= u + 1e-7, || format!("seed {seed}: contracted lower {l} > upper {u}"))
}

pub fn submultiplicative(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let n = shape.dim();
    let c1 = operator(shape, random_hermitian(n, &mut rng));
    let c2 = operator(shape, random_hermitian(n, &mut rng));
    let prod = operator(shape, c1.matrix() * c2.matrix());
    let l = lower(&prod, seed);
    let (u1, u2) = (upper(&c1, seed), upper(&c2, seed));
    ensure(l <= u1 * u2 + 1e-7, || format!("seed {seed}: lower(C1C2) {l} > {u1} * {u2}"))
}

/// The realignment lower bound stays below every validated decomposition.
pub fn realignment_consistency(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let (d, mixture) = if seed % 2 == 0 {
        (random_density_with(shape, &mut rng), None)
    } else {
        let (d, m) = random_separable(shape, 1 + (seed as usize % 4), seed).unwrap();
        (d, Some(m.to_standard()))
    };
    let r = lower_bound_realignment(&d);
    let mut decs: Vec<StandardDecomposition> = vec![
        upper_bound_spectral(&d).unwrap().1,
        upper_bound_realignment(&d).1,
        hermitian_upper(&d).unwrap().1.to_standard(),
    ];
    decs.extend(mixture);
    for dec in decs {
        let rep = dec.validate(&d);
        if rep.valid {
            ensure(r <= rep.weight + 1e-8, || format!("seed {seed}: realignment {r} > weight {}", rep.weight))?;
        }
    }
    Ok(())
}

pub fn ptp(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let d = random_density_with(shape, &mut rng);
    let ka = random_kraus(shape.dh(), rng.random_range(1..=3), &mut rng);
    let kb = random_kraus(shape.dj(), rng.random_range(1..=3), &mut rng);
    let out = apply_local_channels(&d, &ka, &kb);
    let (l, u) = (lower(&out, seed), upper(&d, seed));
    ensure(l <= u + 1e-7, || format!("seed {seed}: channel output lower {l} > upper {u}"))
}

fn embed(pieces: &[(usize, usize, &CMatrix)], offsets_h: &[usize], offsets_j: &[usize], dims_j: &[usize], shape: Shape) -> CMatrix {
    let n = shape.dim();
    let dj = shape.dj();
    let mut m = CMatrix::zeros(n, n);
    for &(a, b, piece) in pieces {
        let bj = dims_j[b];
        let idx = |x: usize| (offsets_h[a] + x / bj) * dj + offsets_j[b] + x % bj;
        for r in 0..piece.nrows() {
            for col in 0..piece.ncols() {
                m[(idx(r), idx(col))] += piece[(r, col)];
            }
        }
    }
    m
}

/// `C = Σ C_ab` over `H = H₁ ⊕ H₂`, `J = J₁ ⊕ J₂`.
pub fn block_bounds(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let dims_h = [rng.random_range(1..=2), rng.random_range(1..=2)];
    let dims_j = [rng.random_range(1..=2), rng.random_range(1..=2)];
    let shape = Shape::new(dims_h[0] + dims_h[1], dims_j[0] + dims_j[1]).unwrap();
    let offsets_h = [0, dims_h[0]];
    let offsets_j = [0, dims_j[0]];
    let mut pieces = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            let s = Shape::new(dims_h[a], dims_j[b]).unwrap();
            let w: f64 = rng.random_range(0.1..1.0);
            pieces.push((a, b, random_density_with(s, &mut rng).scale(w)));
        }
    }
    let refs: Vec<(usize, usize, &CMatrix)> = pieces.iter().map(|(a, b, p)| (*a, *b, p.matrix())).collect();
    let c = operator(shape, embed(&refs, &offsets_h, &offsets_j, &dims_j, shape));
    let sum_lower: f64 = pieces.iter().map(|(_, _, p)| lower(p, seed)).sum();
    let sum_upper: f64 = pieces.iter().map(|(_, _, p)| upper(p, seed)).sum();
    let (lc, uc) = (lower(&c, seed), upper(&c, seed));
    ensure(sum_lower / 4.0 <= uc + 1e-7, || format!("seed {seed}: block average {} > upper {uc}", sum_lower / 4.0))?;
    ensure(lc <= sum_upper + 1e-7, || format!("seed {seed}: lower {lc} > block upper sum {sum_upper}"))
}

fn transport(dec: &StandardDecomposition, u: &CMatrix, v: &CMatrix) -> StandardDecomposition {
    let mut out = StandardDecomposition::new(dec.shape);
    for t in &dec.terms {
        out.push(t.weight, u * &t.left * u.adjoint(), v * &t.right * v.adjoint());
    }
    out
}

/// Certificates moved by `U⊗V` certify the same values for the moved state.
pub fn local_unitary_invariance(seed: u64) -> Check {
    let mut rng = rng_from_seed(seed);
    let shape = shape_for(&mut rng, 3);
    let d = random_density(shape, seed);
    let (u, v) = (haar_unitary(shape.dh(), &mut rng), haar_unitary(shape.dj(), &mut rng));
    let uv = kron(&u, &v);
    let moved = operator(shape, &uv * d.matrix() * uv.adjoint());
    let b = pi_bounds(&d, &fast_config(seed)).unwrap();
    for bound in [&b.pi_lower, &b.pi_upper] {
        let recomputed = match &bound.certificate {
            Certificate::TraceNorm => trace_norm_oracle(moved.matrix()),
            Certificate::Realignment => lower_bound_realignment(&moved),
            Certificate::Witness(c) => {
                let c2 = BipartiteVector::new(shape, &uv * c.data()).unwrap();
                witness_value(&moved, &c2).unwrap()
            }
            Certificate::Standard(dec) => {
                let rep = transport(dec, &u, &v).validate(&moved);
                if !rep.valid {
                    return Err(format!("seed {seed}: transported decomposition invalid"));
                }
                rep.weight
            }
            Certificate::Signed(dec) => {
                let rep = transport(&dec.to_standard(), &u, &v).validate(&moved);
                if !rep.valid {
                    return Err(format!("seed {seed}: transported signed decomposition invalid"));
                }
                rep.weight
            }
            other => return Err(format!("seed {seed}: unexpected certificate {other:?}")),
        };
        ensure((recomputed - bound.value).abs() < 1e-8, || {
            format!("seed {seed}: {} moved from {} to {recomputed}", bound.method, bound.value)
        })?;
    }
    Ok(())
}
