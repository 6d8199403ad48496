//! AAN forward DCTs: the 8-bit fixed-point `jfdctfst` port and the
//! single-precision `jfdctflt` port. Both produce coefficients scaled by
//! 8 * s[u] * s[v] with s[0] = 1, s[k] = sqrt(2) cos(k pi / 16).

use super::constants::*;

/// Fixed-point multiply; the fast path truncates instead of rounding.
#[inline]
fn mul(x: i32, c: i32) -> i32 {
    (x * c) >> IFAST_CONST_BITS
}

fn pass_fast(d: &mut [i32; 64], base: usize, stride: usize) {
    let at = |k: usize| base + k * stride;
    let tmp0 = d[at(0)] + d[at(7)];
    let tmp7 = d[at(0)] - d[at(7)];
    let tmp1 = d[at(1)] + d[at(6)];
    let tmp6 = d[at(1)] - d[at(6)];
    let tmp2 = d[at(2)] + d[at(5)];
    let tmp5 = d[at(2)] - d[at(5)];
    let tmp3 = d[at(3)] + d[at(4)];
    let tmp4 = d[at(3)] - d[at(4)];

    let tmp10 = tmp0 + tmp3;
    let tmp13 = tmp0 - tmp3;
    let tmp11 = tmp1 + tmp2;
    let tmp12 = tmp1 - tmp2;

    d[at(0)] = tmp10 + tmp11;
    d[at(4)] = tmp10 - tmp11;

    let z1 = mul(tmp12 + tmp13, IFAST_0_707106781);
    d[at(2)] = tmp13 + z1;
    d[at(6)] = tmp13 - z1;

    let tmp10 = tmp4 + tmp5;
    let tmp11 = tmp5 + tmp6;
    let tmp12 = tmp6 + tmp7;

    let z5 = mul(tmp10 - tmp12, IFAST_0_382683433);
    let z2 = mul(tmp10, IFAST_0_541196100) + z5;
    let z4 = mul(tmp12, IFAST_1_306562965) + z5;
    let z3 = mul(tmp11, IFAST_0_707106781);

    let z11 = tmp7 + z3;
    let z13 = tmp7 - z3;

    d[at(5)] = z13 + z2;
    d[at(3)] = z13 - z2;
    d[at(1)] = z11 + z4;
    d[at(7)] = z11 - z4;
}

/// Rows, then columns.
pub(super) fn fdct_ifast(d: &mut [i32; 64]) {
    for r in 0..8 {
        pass_fast(d, r * 8, 1);
    }
    for c in 0..8 {
        pass_fast(d, c, 8);
    }
}

fn pass_float(d: &mut [f32; 64], base: usize, stride: usize) {
    let at = |k: usize| base + k * stride;
    let tmp0 = d[at(0)] + d[at(7)];
    let tmp7 = d[at(0)] - d[at(7)];
    let tmp1 = d[at(1)] + d[at(6)];
    let tmp6 = d[at(1)] - d[at(6)];
    let tmp2 = d[at(2)] + d[at(5)];
    let tmp5 = d[at(2)] - d[at(5)];
    let tmp3 = d[at(3)] + d[at(4)];
    let tmp4 = d[at(3)] - d[at(4)];

    let tmp10 = tmp0 + tmp3;
    let tmp13 = tmp0 - tmp3;
    let tmp11 = tmp1 + tmp2;
    let tmp12 = tmp1 - tmp2;

    d[at(0)] = tmp10 + tmp11;
    d[at(4)] = tmp10 - tmp11;

    let z1 = (tmp12 + tmp13) * FLOAT_0_707106781;
    d[at(2)] = tmp13 + z1;
    d[at(6)] = tmp13 - z1;

    let tmp10 = tmp4 + tmp5;
    let tmp11 = tmp5 + tmp6;
    let tmp12 = tmp6 + tmp7;

    let z5 = (tmp10 - tmp12) * FLOAT_0_382683433;
    let z2 = FLOAT_0_541196100 * tmp10 + z5;
    let z4 = FLOAT_1_306562965 * tmp12 + z5;
    let z3 = tmp11 * FLOAT_0_707106781;

    let z11 = tmp7 + z3;
    let z13 = tmp7 - z3;

    d[at(5)] = z13 + z2;
    d[at(3)] = z13 - z2;
    d[at(1)] = z11 + z4;
    d[at(7)] = z11 - z4;
}

/// Rows, then columns.
pub(super) fn fdct_float(d: &mut [f32; 64]) {
    for r in 0..8 {
        pass_float(d, r * 8, 1);
    }
    for c in 0..8 {
        pass_float(d, c, 8);
    }
}

/// The per-index AAN scale factor s[k].
pub(super) fn aan_scale(k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        core::f64::consts::SQRT_2 * libm::cos(k as f64 * core::f64::consts::PI / 16.0)
    }
}
