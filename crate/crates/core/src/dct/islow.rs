//! Accurate integer DCT (LLM, 12 multiplies), ported from the reference
//! library's `jfdctint`.

use super::constants::*;

#[inline]
fn descale(x: i32, n: u32) -> i32 {
    (x + (1 << (n - 1))) >> n
}

/// One 1-D pass over the 8 samples at `base + k * stride`.
fn pass(d: &mut [i32; 64], base: usize, stride: usize, first: bool) {
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

    // Pass 1 keeps PASS1_BITS of extra precision; pass 2 removes it.
    let odd_shift = if first {
        ISLOW_CONST_BITS - ISLOW_PASS1_BITS
    } else {
        ISLOW_CONST_BITS + ISLOW_PASS1_BITS
    };
    if first {
        d[at(0)] = (tmp10 + tmp11) << ISLOW_PASS1_BITS;
        d[at(4)] = (tmp10 - tmp11) << ISLOW_PASS1_BITS;
    } else {
        d[at(0)] = descale(tmp10 + tmp11, ISLOW_PASS1_BITS);
        d[at(4)] = descale(tmp10 - tmp11, ISLOW_PASS1_BITS);
    }

    let z1 = (tmp12 + tmp13) * FIX_0_541196100;
    d[at(2)] = descale(z1 + tmp13 * FIX_0_765366865, odd_shift);
    d[at(6)] = descale(z1 - tmp12 * FIX_1_847759065, odd_shift);

    let z1 = tmp4 + tmp7;
    let z2 = tmp5 + tmp6;
    let z3 = tmp4 + tmp6;
    let z4 = tmp5 + tmp7;
    let z5 = (z3 + z4) * FIX_1_175875602;

    let tmp4 = tmp4 * FIX_0_298631336;
    let tmp5 = tmp5 * FIX_2_053119869;
    let tmp6 = tmp6 * FIX_3_072711026;
    let tmp7 = tmp7 * FIX_1_501321110;
    let z1 = z1 * -FIX_0_899976223;
    let z2 = z2 * -FIX_2_562915447;
    let z3 = z3 * -FIX_1_961570560 + z5;
    let z4 = z4 * -FIX_0_390180644 + z5;

    d[at(7)] = descale(tmp4 + z1 + z3, odd_shift);
    d[at(5)] = descale(tmp5 + z2 + z4, odd_shift);
    d[at(3)] = descale(tmp6 + z2 + z3, odd_shift);
    d[at(1)] = descale(tmp7 + z1 + z4, odd_shift);
}

/// Rows, then columns. Output is 8x the JPEG-normalized coefficients.
pub(super) fn fdct_islow(d: &mut [i32; 64]) {
    for r in 0..8 {
        pass(d, r * 8, 1, true);
    }
    for c in 0..8 {
        pass(d, c, 8, false);
    }
}
