use crate::hilbert::SpaceSpec;
use crate::{Error, Matrix, Result, C64};

/// Reduced density matrix on the factors `keep` (in increasing order).
pub fn partial_trace(rho: &Matrix, space: &SpaceSpec, keep: &[usize]) -> Result<(Matrix, SpaceSpec)> {
    let dims: Vec<usize> = space.factors().iter().map(|f| f.dim).collect();
    let d = space.dim();
    if rho.dim() != (d, d) {
        return Err(Error::SpaceMismatch("density matrix does not match space".into()));
    }
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::invalid("factor index out of range"));
    }
    let sub = space.subspace(&keep)?;
    let dk = sub.dim();
    // strides of each factor in the full index (first factor most significant)
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let de: usize = traced.iter().map(|&i| dims[i]).product();
    let split = |mut idx: usize, which: &[usize]| -> usize {
        // offset contributed by `which` factors for a mixed-radix index over them
        let mut off = 0;
        for &f in which.iter().rev() {
            off += (idx % dims[f]) * strides[f];
            idx /= dims[f];
        }
        off
    };
    let keep_off: Vec<usize> = (0..dk).map(|i| split(i, &keep)).collect();
    let env_off: Vec<usize> = (0..de).map(|i| split(i, &traced)).collect();
    let mut out = Matrix::zeros((dk, dk));
    for (a, &oa) in keep_off.iter().enumerate() {
        for (b, &ob) in keep_off.iter().enumerate() {
            let mut acc = C64::from(0.0);
            for &e in &env_off {
                acc += rho[[oa + e, ob + e]];
            }
            out[[a, b]] = acc;
        }
    }
    Ok((out, sub))
}
