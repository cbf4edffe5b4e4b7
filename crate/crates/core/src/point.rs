//! Point transforms `s = T(r)`, where each output pixel depends only on the
//! input pixel at the same location.
//!
//! All of them are evaluated through a 256-entry [`Lut`].

use alloc::vec;

use crate::error::{Error, Result};
use crate::exec::{Executor, Serial};
use crate::image::{saturate, Image, GRAY_LEVELS, MAX_GRAY};

/// Gray-level lookup table; entry `i` is the output for input level `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Lut {
    table: [u8; GRAY_LEVELS],
}

impl Lut {
    pub fn new(table: [u8; GRAY_LEVELS]) -> Self {
        Lut { table }
    }

    /// Accepts any slice of exactly 256 levels.
    pub fn from_slice(table: &[u8]) -> Result<Self> {
        let table: [u8; GRAY_LEVELS] = table.try_into().map_err(|_| Error::InvalidParameter {
            name: "lut",
            reason: "table must have exactly 256 entries",
        })?;
        Ok(Lut { table })
    }

    pub fn from_fn(mut f: impl FnMut(u8) -> u8) -> Self {
        let mut table = [0u8; GRAY_LEVELS];
        for (i, slot) in table.iter_mut().enumerate() {
            *slot = f(i as u8);
        }
        Lut { table }
    }

    pub fn identity() -> Self {
        Lut::from_fn(|r| r)
    }

    /// `s = (L - 1) - r`
    pub fn negative(max_gray: u8) -> Self {
        Lut::from_fn(|r| max_gray.saturating_sub(r))
    }

    /// `s = (L - 1) * (r / (L - 1))^gamma`, rounded and clamped.
    pub fn power_law(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "must be a finite value greater than zero",
            });
        }
        let top = f64::from(MAX_GRAY);
        Ok(Lut::from_fn(|r| {
            saturate(top * libm::pow(f64::from(r) / top, gamma))
        }))
    }

    pub fn table(&self) -> &[u8; GRAY_LEVELS] {
        &self.table
    }

    #[inline]
    pub fn map(&self, level: u8) -> u8 {
        self.table[level as usize]
    }
}

pub fn apply_lut(img: &Image, lut: &Lut) -> Image {
    apply_lut_with(&Serial, img, lut)
}

pub fn apply_lut_with<E: Executor>(exec: &E, img: &Image, lut: &Lut) -> Image {
    let w = img.width();
    let src = img.pixels();
    let mut out = vec![0u8; src.len()];
    exec.run(w, &mut out, |first_row, rows| {
        let start = first_row * w;
        for (d, &s) in rows.iter_mut().zip(&src[start..]) {
            *d = lut.map(s);
        }
    });
    Image::from_raw(w, img.height(), out)
}

/// Photographic negative: every pixel `r` becomes `max_gray - r`.
pub fn negate(img: &Image) -> Image {
    negate_with(&Serial, img)
}

pub fn negate_with<E: Executor>(exec: &E, img: &Image) -> Image {
    apply_lut_with(exec, img, &Lut::negative(img.max_gray()))
}

/// Normalized power law. `gamma > 1` darkens and compresses the low end of
/// the gray scale while spreading out the high end; `gamma == 1` is the
/// identity.
pub fn gray_stretch(img: &Image, gamma: f64) -> Result<Image> {
    gray_stretch_with(&Serial, img, gamma)
}

pub fn gray_stretch_with<E: Executor>(exec: &E, img: &Image, gamma: f64) -> Result<Image> {
    Ok(apply_lut_with(exec, img, &Lut::power_law(gamma)?))
}

pub const DEFAULT_GAMMA: f64 = 2.0;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::RowByRow;
    use proptest::prelude::*;

    fn image() -> impl Strategy<Value = Image> {
        (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |px| Image::new(w, h, px).unwrap())
        })
    }

    #[test]
    fn lut_examples() {
        let img = Image::new(2, 2, vec![0, 9, 100, 255]).unwrap();
        assert_eq!(apply_lut(&img, &Lut::identity()), img);
        assert_eq!(apply_lut(&img, &Lut::from_fn(|_| 7)).pixels(), &[7; 4]);
        assert_eq!(apply_lut(&img, &Lut::from_fn(|i| 255 - i)), negate(&img));
        assert!(Lut::from_slice(&[0; 255]).is_err());
        assert_eq!(Lut::from_slice(&[3; 256]).unwrap().map(77), 3);
    }

    #[test]
    fn negate_examples() {
        let img = Image::new(3, 1, vec![0, 255, 100]).unwrap();
        assert_eq!(negate(&img).pixels(), &[255, 0, 155]);
    }

    #[test]
    fn stretch_examples() {
        let img = Image::new(3, 1, vec![0, 255, 128]).unwrap();
        // 255 * (128/255)^2 = 16384/255 = 64.25...
        assert_eq!(gray_stretch(&img, 2.0).unwrap().pixels(), &[0, 255, 64]);
        for gamma in [0.3, 1.0, 2.0, 7.5] {
            let out = gray_stretch(&img, gamma).unwrap();
            assert_eq!(out.get(0, 0), 0);
            assert_eq!(out.get(1, 0), 255);
        }
    }

    #[test]
    fn stretch_rejects_bad_gamma() {
        let img = Image::filled(1, 1, 3).unwrap();
        for gamma in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = gray_stretch(&img, gamma).unwrap_err();
            assert!(err.is_parameter());
        }
    }

    #[test]
    fn stretch_matches_exact_rational_oracle() {
        // 255 * (r/255)^2 = r^2 / 255; round half away from zero in integers.
        let lut = Lut::power_law(2.0).unwrap();
        for r in 0..=255u32 {
            let expected = (2 * r * r + 255) / 510;
            assert_eq!(u32::from(lut.map(r as u8)), expected, "r = {r}");
        }
    }

    #[test]
    fn stretch_is_monotone_and_compresses_low_end() {
        for gamma in [0.5, 1.5, 2.0, 3.0, 10.0] {
            let lut = Lut::power_law(gamma).unwrap();
            for r in 1..=255u8 {
                assert!(lut.map(r - 1) <= lut.map(r), "gamma {gamma} r {r}");
            }
        }
        let lut = Lut::power_law(2.0).unwrap();
        // slope below 1 at the dark end, above 1 at the bright end
        assert!(lut.map(40) - lut.map(20) < 20);
        assert!(lut.map(250) - lut.map(230) > 20);
    }

    proptest! {
        #[test]
        fn negate_is_involution(img in image()) {
            prop_assert_eq!(negate(&negate(&img)), img);
        }

        #[test]
        fn unit_gamma_is_identity(img in image()) {
            prop_assert_eq!(gray_stretch(&img, 1.0).unwrap(), img);
        }

        #[test]
        fn row_partition_does_not_change_output(img in image(), gamma in 0.1f64..5.0) {
            let lut = Lut::power_law(gamma).unwrap();
            prop_assert_eq!(apply_lut_with(&RowByRow, &img, &lut), apply_lut(&img, &lut));
        }
    }
}
