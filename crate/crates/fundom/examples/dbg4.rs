use fundom::domains::*;
use fundom::funcval::FunctionId;
use fundom::tracer::{StepControl, Window};

fn main() {
    let w = Window::new(-8.0, 4.0, -6.0, 6.0);
    let atlas = gamma_domains(&w, (-3, 1), &StepControl::default()).unwrap();
    for d in atlas.domains.iter().filter(|d| !d.label.conj) {
        let rep = domain_verify(&FunctionId::Gamma, &atlas, d, 30, 11).unwrap();
        println!("{}: slit_max={:.3e} winding {}/{} flagged={} ffail={} ufail={} inv {}/{}",
            d.label, rep.slit_distance_max, rep.winding_one, rep.targets_total,
            rep.flagged, rep.flagged_failures, rep.unflagged_failures,
            rep.inversion_ok, rep.inversion_trials);
    }
}
