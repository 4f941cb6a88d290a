use num_traits::Float;

use super::{K0Element, K0Error};
use crate::bratteli::BratteliDiagram;
use crate::matrix::IntMatrix;

const MAX_ITERATIONS: usize = 1_000_000;

/// Perron value and left eigenvector (`w A = r w`, `Σ w = 1`) of a primitive
/// matrix, by power iteration until successive iterates differ by at most
/// `tol` in every entry.
pub fn perron_left_eigenvector<F: Float>(a: &IntMatrix, tol: F) -> Result<(F, Vec<F>), K0Error> {
    if !a.is_primitive() {
        return Err(K0Error::NotPrimitive(format!("{a} has no strictly positive power")));
    }
    let n = a.rows();
    let entry = |r: usize, c: usize| F::from(a.get(r, c)).expect("matrix entry fits the float type");
    let mut w = vec![F::one() / F::from(n).unwrap(); n];
    let mut r = F::zero();
    for _ in 0..MAX_ITERATIONS {
        // w A, entry c = Σ_r w_r a_rc
        let next: Vec<F> = (0..n)
            .map(|c| (0..n).fold(F::zero(), |acc, row| acc + w[row] * entry(row, c)))
            .collect();
        let sum = next.iter().fold(F::zero(), |acc, &x| acc + x);
        let next: Vec<F> = next.into_iter().map(|x| x / sum).collect();
        r = sum;
        let change = w
            .iter()
            .zip(&next)
            .fold(F::zero(), |acc, (&x, &y)| acc.max((x - y).abs()));
        w = next;
        if change <= tol {
            break;
        }
    }
    Ok((r, w))
}

/// The canonical trace of a diagram whose incidence matrices are eventually
/// a fixed primitive matrix.
#[derive(Clone, Debug)]
pub struct TraceState<F> {
    pub perron_value: F,
    /// First level from which every step uses the repeated matrix.
    pub stationary_from: usize,
    /// `weights[m][i]` is the trace of a minimal projection at vertex `(m, i)`.
    pub weights: Vec<Vec<F>>,
}

impl<F: Float> TraceState<F> {
    pub fn level0(&self) -> &[F] {
        &self.weights[0]
    }

    /// `τ_*(e) = ⟨weights, vector⟩`.
    pub fn evaluate(&self, e: &K0Element) -> F {
        use num_traits::ToPrimitive;
        self.weights[e.level]
            .iter()
            .zip(&e.vector)
            .fold(F::zero(), |acc, (&w, v)| acc + w * F::from(v.to_f64().unwrap_or(f64::NAN)).unwrap())
    }
}

/// Trace state computed to tolerance `tol`. Level-0 weights sum to 1, and
/// pushing an element forward never changes its trace.
pub fn trace_state<F: Float>(d: &BratteliDiagram, tol: F) -> Result<TraceState<F>, K0Error> {
    let mats = d.incidence_matrices();
    let Some(a) = mats.last().cloned() else {
        return Err(K0Error::NotStationary("a diagram with a single level has no incidence matrix".into()));
    };
    if !a.is_square() {
        return Err(K0Error::NotStationary(format!("the last incidence matrix {a} is not square")));
    }
    let start = mats.iter().rposition(|m| *m != a).map_or(0, |i| i + 1);
    let (r, w) = perron_left_eigenvector(&a, tol * F::from(1e-2).unwrap())?;

    let depth = d.depth();
    let mut weights = vec![Vec::new(); depth + 1];
    let mut cur = w;
    for (m, slot) in weights.iter_mut().enumerate().skip(start) {
        let k = (m - start) as i32;
        *slot = cur.iter().map(|&x| x / r.powi(k)).collect();
    }
    cur = weights[start].clone();
    for m in (0..start).rev() {
        // τ_m = τ_{m+1} A_m
        let step = &mats[m];
        cur = (0..step.cols())
            .map(|c| {
                (0..step.rows()).fold(F::zero(), |acc, row| acc + cur[row] * F::from(step.get(row, c)).unwrap())
            })
            .collect();
        weights[m] = cur.clone();
    }
    let total = weights[0].iter().fold(F::zero(), |acc, &x| acc + x);
    for level in &mut weights {
        for x in level.iter_mut() {
            *x = *x / total;
        }
    }
    Ok(TraceState {
        perron_value: r,
        stationary_from: start,
        weights,
    })
}
