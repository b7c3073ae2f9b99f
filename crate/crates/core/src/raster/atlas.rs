//! Embedded 8x16 one-bit glyph atlas covering printable ASCII.

#[rustfmt::skip]
mod data {
    include!("atlas_data.rs");
}

pub const CELL_W: usize = 8;
pub const CELL_H: usize = 16;

const FIRST: u32 = 0x20;
const LAST: u32 = 0x7E;

/// Whether `c` has a glyph. Characters outside the atlas render as `?`.
pub fn has_glyph(c: char) -> bool {
    (FIRST..=LAST).contains(&(c as u32))
}

fn rows(c: char) -> &'static [u8; 16] {
    let code = if has_glyph(c) { c as u32 } else { '?' as u32 };
    &data::GLYPHS[(code - FIRST) as usize]
}

/// Whether the atlas pixel at column `x` (0..8) and row `y` (0..16) is ink.
#[inline]
pub fn ink(c: char, x: usize, y: usize) -> bool {
    rows(c)[y] & (0x80 >> x) != 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::content::{LOREM_IPSUM, gen_date, gen_numeric};
    use crate::rng::SampleRng;

    #[test]
    fn space_is_blank_and_letters_have_ink() {
        assert!((0..CELL_H).all(|y| (0..CELL_W).all(|x| !ink(' ', x, y))));
        for c in ('a'..='z').chain('A'..='Z').chain('0'..='9') {
            let n = (0..CELL_H).flat_map(|y| (0..CELL_W).map(move |x| (x, y))).filter(|&(x, y)| ink(c, x, y)).count();
            assert!(n > 4, "{c}");
        }
    }

    #[test]
    fn every_generated_character_is_covered() {
        let mut rng = SampleRng::from_seed(1);
        let mut text = alloc::string::String::from(LOREM_IPSUM);
        for _ in 0..200 {
            text.push_str(&gen_numeric(&mut rng));
            text.push_str(&gen_date(&mut rng));
        }
        text.push_str("Table 1:");
        assert!(text.chars().all(has_glyph));
    }
}
