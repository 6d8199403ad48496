//! Parser checks against Pillow-encoded fixtures (see `fixtures/make_fixtures.py`).

use std::fs;
use std::path::PathBuf;

use dirscope_core::jpeg::{estimate_quality, parse_jpeg, qt_from_quality, JpegError, QuantTable, SubsamplingClass};
use serde::Deserialize;

#[derive(Deserialize)]
struct Expected {
    file: String,
    quality: u32,
    subsampling: String,
    pillow_tables: std::collections::BTreeMap<String, Vec<u8>>,
}

fn fixture(name: &str) -> Vec<u8> {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    fs::read(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn expected() -> Vec<Expected> {
    serde_json::from_slice(&fixture("expected.json")).unwrap()
}

fn flat(t: &QuantTable) -> Vec<u8> {
    t.values().iter().flatten().copied().collect()
}

#[test]
fn reference_fixtures_cover_the_grid() {
    let e = expected();
    assert_eq!(e.len(), 12);
    for q in [50, 75, 90, 100] {
        for s in ["4:4:4", "4:2:2", "4:2:0"] {
            assert!(e.iter().any(|x| x.quality == q && x.subsampling == s));
        }
    }
}

#[test]
fn tables_match_the_encoder_exactly() {
    for e in expected() {
        let s = parse_jpeg(&fixture(&e.file)).unwrap_or_else(|err| panic!("{}: {err}", e.file));
        let luma = s.luma_table().unwrap();
        let chroma = s.chroma_table().unwrap();
        assert_eq!(flat(luma), e.pillow_tables["0"], "{}", e.file);
        assert_eq!(flat(chroma), e.pillow_tables["1"], "{}", e.file);
        assert_eq!(s.quant_tables.len(), e.pillow_tables.len());
    }
}

#[test]
fn tables_match_the_quality_scaling() {
    for e in expected() {
        let s = parse_jpeg(&fixture(&e.file)).unwrap();
        let luma = s.luma_table().unwrap();
        let chroma = s.chroma_table().unwrap();
        assert_eq!(
            luma.values(),
            qt_from_quality(e.quality, &QuantTable::standard_luma())
                .unwrap()
                .values()
        );
        assert_eq!(
            chroma.values(),
            qt_from_quality(e.quality, &QuantTable::standard_chroma())
                .unwrap()
                .values()
        );
        let est = estimate_quality(luma, &QuantTable::standard_luma());
        assert_eq!(est.distance, 0, "{}", e.file);
        // q = 100 is all ones, which every quality >= 100 reproduces
        assert_eq!(
            qt_from_quality(est.qf, &QuantTable::standard_luma()).unwrap().values(),
            luma.values()
        );
    }
}

#[test]
fn subsampling_classes_match() {
    for e in expected() {
        let s = parse_jpeg(&fixture(&e.file)).unwrap();
        assert_eq!(
            Some(s.subsampling_class),
            SubsamplingClass::from_label(&e.subsampling),
            "{}",
            e.file
        );
        assert_eq!((s.width, s.height), (64, 48));
        assert_eq!(s.exif_orientation, None);
    }
}

#[test]
fn exif_orientation_is_read() {
    let s = parse_jpeg(&fixture("exif_orientation6.jpg")).unwrap();
    assert_eq!(s.exif_orientation.map(|o| o.code()), Some(6));
}

#[test]
fn malformed_fixtures_return_typed_errors() {
    assert_eq!(parse_jpeg(&fixture("missing_soi.jpg")), Err(JpegError::MissingSoi));
    assert!(matches!(
        parse_jpeg(&fixture("truncated_dqt.jpg")),
        Err(JpegError::Truncated { .. })
    ));
    assert!(matches!(
        parse_jpeg(&fixture("bad_length_short.jpg")),
        Err(JpegError::BadSegmentLength { length: 1, .. })
    ));
    assert!(matches!(
        parse_jpeg(&fixture("bad_length_long.jpg")),
        Err(JpegError::Truncated { .. } | JpegError::BadSegmentLength { .. })
    ));
    assert!(matches!(
        parse_jpeg(&fixture("bad_dqt_length.jpg")),
        Err(JpegError::MalformedDqt { .. })
    ));
}

#[test]
fn every_prefix_of_a_fixture_is_handled() {
    let data = fixture("q75_s420.jpg");
    for n in 0..data.len() {
        // must not panic
        let _ = parse_jpeg(&data[..n]);
    }
}
