use std::time::Instant;

use vertop_core::betagamma::{
    check_heisenberg_relations, check_sp_bracket_closure, SymplecticConfig,
};
use vertop_core::ModeWindow;

#[test]
fn heisenberg_relations_both_models() {
    let t = Instant::now();
    for g in [1, 2] {
        for cfg in [SymplecticConfig::plain(g), SymplecticConfig::gaussian(g)] {
            let probes = cfg.probes(5, 3);
            let e = check_heisenberg_relations(&cfg, ModeWindow::new(-4, 4), &probes, 5);
            assert!(e.passed(), "{e:?}");
        }
    }
    eprintln!("heisenberg: {:?}", t.elapsed());
}

#[test]
fn sp_closure_level() {
    let t = Instant::now();
    let cfg = SymplecticConfig::plain(1);
    let probes = cfg.probes(2, 2);
    let e = check_sp_bracket_closure(&cfg, ModeWindow::new(-2, 2), &probes, 3);
    eprintln!("sp: {:?} {e:?}", t.elapsed());
    assert!(e.passed(), "{e:?}");
    assert_eq!(e.get_param("central"), Some("-1/2"));
}
