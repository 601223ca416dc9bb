//! Full-pipeline fidelity on the built-in icon corpus: rasterize each icon,
//! vectorize the image, and compare the result against both the image and
//! the hand-written source document.

use svgkit::corpus::ICONS;
use svgkit::metrics::{chamfer, mse};
use svgkit::parse_svg;
use svgkit::raster::rasterize;
use svgkit::vectorize::{vectorize, VectorizeConfig};

const FRAME: u32 = 224;

fn corpus_errors(config: &VectorizeConfig) -> (f64, f64) {
    let mut mse_sum = 0.0;
    let mut cd_sum = 0.0;
    for icon in &ICONS {
        let reference = parse_svg(icon.svg).unwrap();
        let img = rasterize(&reference, FRAME, 1);
        let traced = vectorize(&img, config);
        let back = rasterize(&traced, FRAME, 1);
        let m = mse(&img, &back).unwrap();
        let c = chamfer(&traced, &reference, 2.0).unwrap();
        mse_sum += m;
        cd_sum += c;
    }
    (mse_sum / ICONS.len() as f64, cd_sum / ICONS.len() as f64)
}

#[test]
fn default_config_meets_fidelity_targets() {
    let (mean_mse, mean_cd) = corpus_errors(&VectorizeConfig::default());
    assert!(mean_mse <= 0.02, "mean MSE {mean_mse} > 0.02");
    assert!(mean_cd <= 5.0, "mean CD {mean_cd} > 5.0");
}

#[test]
fn fidelity_is_monotone_in_config_tightness() {
    let levels = [
        VectorizeConfig { simplify_epsilon: 2.0, fit_error: 16.0, ..VectorizeConfig::default() },
        VectorizeConfig::default(),
        VectorizeConfig { simplify_epsilon: 0.5, fit_error: 1.0, ..VectorizeConfig::default() },
    ];
    let errs: Vec<f64> = levels.iter().map(|c| corpus_errors(c).0).collect();
    assert!(
        errs[0] >= errs[1] && errs[1] >= errs[2],
        "mean MSE not monotone across coarse/default/fine: {errs:?}"
    );
}

#[test]
fn every_icon_individually_round_trips_well() {
    let config = VectorizeConfig::default();
    for icon in &ICONS {
        let reference = parse_svg(icon.svg).unwrap();
        let img = rasterize(&reference, FRAME, 1);
        let traced = vectorize(&img, &config);
        let back = rasterize(&traced, FRAME, 1);
        let m = mse(&img, &back).unwrap();
        let c = chamfer(&traced, &reference, 2.0).unwrap();
        assert!(m <= 0.05, "{}: MSE {m}", icon.name);
        assert!(c <= 12.0, "{}: CD {c}", icon.name);
    }
}
