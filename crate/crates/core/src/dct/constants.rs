//! Fixed-point constants of the reference JPEG library's forward DCTs.
//!
//! Integer LLM path: C. Loeffler, A. Ligtenberg, G. Moschytz, "Practical fast
//! 1-D DCT algorithms with 11 multiplications", ICASSP 1989. Constants are
//! round(x * 2^13).
//!
//! Fast integer and float paths: Y. Arai, T. Agui, M. Nakajima, "A fast
//! DCT-SQ scheme for images", Trans. IEICE E-71(11), 1988. Integer constants
//! are round(x * 2^8).

pub const ISLOW_CONST_BITS: u32 = 13;
pub const ISLOW_PASS1_BITS: u32 = 2;

pub const FIX_0_298631336: i32 = 2446;
pub const FIX_0_390180644: i32 = 3196;
pub const FIX_0_541196100: i32 = 4433;
pub const FIX_0_765366865: i32 = 6270;
pub const FIX_0_899976223: i32 = 7373;
pub const FIX_1_175875602: i32 = 9633;
pub const FIX_1_501321110: i32 = 12299;
pub const FIX_1_847759065: i32 = 15137;
pub const FIX_1_961570560: i32 = 16069;
pub const FIX_2_053119869: i32 = 16819;
pub const FIX_2_562915447: i32 = 20995;
pub const FIX_3_072711026: i32 = 25172;

pub const IFAST_CONST_BITS: u32 = 8;

pub const IFAST_0_382683433: i32 = 98;
pub const IFAST_0_541196100: i32 = 139;
pub const IFAST_0_707106781: i32 = 181;
pub const IFAST_1_306562965: i32 = 334;

pub const FLOAT_0_382683433: f32 = 0.382_683_43;
pub const FLOAT_0_541196100: f32 = 0.541_196_1;
pub const FLOAT_0_707106781: f32 = 0.707_106_77;
pub const FLOAT_1_306562965: f32 = 1.306_563;

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    fn fix(x: f64, bits: u32) -> i32 {
        libm::round(x * (1u32 << bits) as f64) as i32
    }

    #[test]
    fn constants_match_their_names() {
        let islow = [
            (FIX_0_298631336, 0.298631336),
            (FIX_0_390180644, 0.390180644),
            (FIX_0_541196100, 0.541196100),
            (FIX_0_765366865, 0.765366865),
            (FIX_0_899976223, 0.899976223),
            (FIX_1_175875602, 1.175875602),
            (FIX_1_501321110, 1.501321110),
            (FIX_1_847759065, 1.847759065),
            (FIX_1_961570560, 1.961570560),
            (FIX_2_053119869, 2.053119869),
            (FIX_2_562915447, 2.562915447),
            (FIX_3_072711026, 3.072711026),
        ];
        for (c, x) in islow {
            assert_eq!(c, fix(x, ISLOW_CONST_BITS), "{x}");
        }
        for (c, x) in [
            (IFAST_0_382683433, 0.382683433),
            (IFAST_0_541196100, 0.541196100),
            (IFAST_0_707106781, 0.707106781),
            (IFAST_1_306562965, 1.306562965),
        ] {
            assert_eq!(c, fix(x, IFAST_CONST_BITS), "{x}");
        }
    }

    #[test]
    fn constants_are_the_cosine_combinations() {
        use core::f64::consts::{PI, SQRT_2};
        let c = |k: f64| libm::cos(k * PI / 16.0);
        let pairs = [
            (0.298631336, SQRT_2 * (-c(1.0) + c(3.0) + c(5.0) - c(7.0))),
            (0.541196100, SQRT_2 * c(6.0)),
            (0.765366865, SQRT_2 * (c(2.0) - c(6.0))),
            (1.175875602, SQRT_2 * c(3.0)),
            (1.847759065, SQRT_2 * (c(2.0) + c(6.0))),
            (0.382683433, c(6.0)),
            (0.707106781, c(4.0)),
            (1.306562965, c(2.0) + c(6.0)),
        ];
        for (named, exact) in pairs {
            assert!((named - exact).abs() < 1e-9, "{named} vs {exact}");
        }
    }
}
