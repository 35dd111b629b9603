//! Low-level amplitude kernels on row-major tensors. A tensor is viewed as
//! `(outer, dim, inner)` around the mode being acted on.

use num_complex::Complex64 as C64;

use crate::par;

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Build a new tensor where mode `pos` has `new_dim` levels and output row `n`
/// equals `scale * input row m` for `rule(n) = Some((m, scale))`, zero otherwise.
pub(crate) fn map_rows<F>(amps: &[C64], dims: &[usize], pos: usize, new_dim: usize, rule: F) -> Vec<C64>
where
    F: Fn(usize) -> Option<(usize, C64)> + Sync + Send,
{
    let d = dims[pos];
    let inner: usize = dims[pos + 1..].iter().product();
    let outer: usize = dims[..pos].iter().product();
    let mut out = vec![C64::new(0.0, 0.0); outer * new_dim * inner];
    if inner == 0 || out.is_empty() {
        return out;
    }
    let rules: Vec<Option<(usize, C64)>> = (0..new_dim).map(&rule).collect();
    par::for_each_chunk_mut(&mut out, inner, |row, dst| {
        let o = row / new_dim;
        let n = row % new_dim;
        if let Some((m, s)) = rules[n] {
            if m < d {
                let src = &amps[(o * d + m) * inner..(o * d + m + 1) * inner];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x = s * y;
                }
            }
        }
    });
    out
}

/// Largest level of mode `pos` carrying a nonzero amplitude, or `None` if the
/// tensor is identically zero.
pub(crate) fn top_occupied(amps: &[C64], dims: &[usize], pos: usize) -> Option<usize> {
    let d = dims[pos];
    let inner: usize = dims[pos + 1..].iter().product();
    let outer: usize = dims[..pos].iter().product();
    (0..d).rev().find(|&n| {
        (0..outer).any(|o| {
            amps[(o * d + n) * inner..(o * d + n + 1) * inner]
                .iter()
                .any(|z| z.re != 0.0 || z.im != 0.0)
        })
    })
}

/// Maximum of `n_i + n_j` over the support of the tensor.
pub(crate) fn max_pair_total(amps: &[C64], dims: &[usize], pi: usize, pj: usize) -> Option<usize> {
    let st = strides(dims);
    let mut best: Option<usize> = None;
    for (idx, z) in amps.iter().enumerate() {
        if z.re != 0.0 || z.im != 0.0 {
            let t = (idx / st[pi]) % dims[pi] + (idx / st[pj]) % dims[pj];
            if best.map_or(true, |b| t > b) {
                best = Some(t);
            }
        }
    }
    best
}

/// Apply a photon-number-preserving two-mode transformation given by its
/// blocks: `blocks[N][m][k] = <m, N-m| U |k, N-k>` with `m`, `k` the level of
/// mode `pi`. Requires `pi < pj`.
pub(crate) fn apply_two_mode(
    amps: &[C64],
    dims: &[usize],
    pi: usize,
    pj: usize,
    out_i: usize,
    out_j: usize,
    blocks: &[Vec<Vec<C64>>],
) -> (Vec<usize>, Vec<C64>) {
    debug_assert!(pi < pj);
    let (di, dj) = (dims[pi], dims[pj]);
    let a: usize = dims[..pi].iter().product();
    let b: usize = dims[pi + 1..pj].iter().product();
    let c: usize = dims[pj + 1..].iter().product();
    let mut out_dims = dims.to_vec();
    out_dims[pi] = out_i;
    out_dims[pj] = out_j;
    let in_si = b * dj * c;
    let in_sa = di * in_si;
    let in_sb = dj * c;
    let chunk = b * out_j * c;
    let mut out = vec![C64::new(0.0, 0.0); a * out_i * chunk];
    if chunk == 0 {
        return (out_dims, out);
    }
    par::for_each_chunk_mut(&mut out, chunk, |row, dst| {
        let ai = row / out_i;
        let mi = row % out_i;
        let base = ai * in_sa;
        for bi in 0..b {
            for mj in 0..out_j {
                let n = mi + mj;
                if n >= blocks.len() {
                    continue;
                }
                let blk = &blocks[n][mi];
                let k_lo = n.saturating_sub(dj - 1);
                let k_hi = n.min(di - 1);
                if k_lo > k_hi {
                    continue;
                }
                let dst_off = (bi * out_j + mj) * c;
                for k in k_lo..=k_hi {
                    let coef = blk[k];
                    if coef.re == 0.0 && coef.im == 0.0 {
                        continue;
                    }
                    let src_off = base + k * in_si + bi * in_sb + (n - k) * c;
                    let src = &amps[src_off..src_off + c];
                    for (x, y) in dst[dst_off..dst_off + c].iter_mut().zip(src) {
                        *x += coef * y;
                    }
                }
            }
        }
    });
    (out_dims, out)
}

/// Occupation tuple of flat index `idx` (last mode fastest).
pub(crate) fn unravel(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}
