use proptest::prelude::*;
use tabsynth_core::augment::{sample_homography, warp, Homography};
use tabsynth_core::layout::PageGeometry;
use tabsynth_core::raster::MaskImage;
use tabsynth_core::rng::{SampleRng, Stream};
use tabsynth_core::sampler::{sample_spec, GenerationBounds, PageVariant};
use tabsynth_core::{GenerationConfig, Generator};

fn small() -> GenerationConfig {
    GenerationConfig {
        rows_max: 8,
        cols_max: 4,
        page_w: 248,
        page_h: 350,
        margin: 14,
        column_gap: 8,
        cell_padding: 2,
        glyph_size: 8,
        min_glyph_size: 4,
        body_glyph_size: 4,
        line_spacing: 1,
        rule_thickness: 1,
        dash_on: 3,
        dash_off: 2,
        column_inset: 1,
        block_gap: 4,
        paragraph_words_min: 10,
        paragraph_words_max: 30,
        max_layout_retries: 64,
        ..GenerationConfig::default()
    }
}

fn table_inside_page(g: &PageGeometry) -> bool {
    let t = g.table.as_ref().unwrap();
    g.page_rect().contains_rect(&t.outer)
        && t.cell_boxes.iter().flatten().all(|c| t.outer.contains_rect(c))
        && t.column_spans.iter().all(|c| t.outer.contains_rect(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spec_respects_bounds(master in any::<u64>(), index in 0u64..1_000_000) {
        let b = GenerationBounds::default();
        let s = sample_spec(master, index, &b).unwrap();
        prop_assert!((b.rows_min..=b.rows_max).contains(&s.rows));
        prop_assert!((b.cols_min..=b.cols_max).contains(&s.cols));
        prop_assert_eq!(s.column_types.len(), s.cols as usize);
        prop_assert_eq!(s.sample_index, index);
        prop_assert_eq!(&s, &sample_spec(master, index, &b).unwrap());
    }

    #[test]
    fn samples_are_consistent(master in any::<u64>(), index in 0u64..10_000) {
        let g = Generator::new(small()).unwrap();
        let s = g.sample(master, index).unwrap();
        prop_assert!(table_inside_page(&s.geometry));
        prop_assert_eq!(s.content.body.len(), s.spec.rows as usize);
        prop_assert_eq!((s.image.width(), s.image.height()), (248, 350));
        for (t, c) in s.table_mask.pixels().iter().zip(s.column_mask.pixels()) {
            prop_assert!(*t == 0 || *t == 255);
            prop_assert!(*c == 0 || *c == 255);
            prop_assert!(*c == 0 || *t == 255);
        }
        if s.spec.variant == PageVariant::TableOnly {
            prop_assert!(s.geometry.text_runs.is_empty());
        }
        prop_assert_eq!(s.image, g.sample(master, index).unwrap().image);
    }

    #[test]
    fn homography_inverse_round_trips(seed in any::<u64>(), jitter in 0.0f64..=0.05) {
        let mut rng = SampleRng::for_stream(seed, Stream::Augmentation);
        let h = sample_homography(&mut rng, jitter, 1240.0, 1754.0).unwrap();
        let inv = h.inverse().unwrap();
        for (x, y) in [(0.0, 0.0), (1240.0, 0.0), (620.0, 877.0), (17.5, 1700.25)] {
            let (u, v) = h.apply(x, y);
            let (bx, by) = inv.apply(u, v);
            prop_assert!((bx - x).abs() < 1e-6 && (by - y).abs() < 1e-6);
        }
    }

    #[test]
    fn warp_keeps_masks_binary_and_nested(seed in any::<u64>()) {
        let g = Generator::new(small().clean()).unwrap();
        let s = g.sample(seed, 0).unwrap();
        let mut rng = SampleRng::for_stream(seed, Stream::Augmentation);
        let h = sample_homography(&mut rng, 0.05, 248.0, 350.0).unwrap();
        let (img, t, c) = warp(&s.image, &s.table_mask, &s.column_mask, &h, [255, 255, 255]).unwrap();
        prop_assert_eq!((img.width(), img.height()), (248, 350));
        for (t, c) in t.pixels().iter().zip(c.pixels()) {
            prop_assert!(*t == 0 || *t == 255);
            prop_assert!(*c == 0 || *t == 255);
        }
    }

    #[test]
    fn identity_warp_is_a_no_op(w in 1u32..40, h in 1u32..40, seed in any::<u64>()) {
        let mut rng = SampleRng::from_seed(seed);
        let px: Vec<u8> = (0..w * h).map(|_| if rng.bernoulli(0.3) { 255 } else { 0 }).collect();
        let m = MaskImage::from_raw(w, h, px).unwrap();
        let img = tabsynth_core::raster::RasterImage::filled(w, h, [9, 8, 7]).unwrap();
        let (i2, t2, c2) = warp(&img, &m, &m, &Homography::IDENTITY, [0, 0, 0]).unwrap();
        prop_assert_eq!(i2, img);
        prop_assert_eq!(&t2, &m);
        prop_assert_eq!(&c2, &m);
    }

    #[test]
    fn bounded_draws_stay_in_range(seed in any::<u64>(), n in 1u64..1_000_000) {
        let mut rng = SampleRng::from_seed(seed);
        for _ in 0..64 {
            prop_assert!(rng.below(n) < n);
            let u = rng.next_f64();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn shuffle_is_a_permutation(seed in any::<u64>(), n in 0usize..200) {
        let mut v: Vec<usize> = (0..n).collect();
        SampleRng::from_seed(seed).shuffle(&mut v);
        v.sort_unstable();
        prop_assert_eq!(v, (0..n).collect::<Vec<_>>());
    }
}
