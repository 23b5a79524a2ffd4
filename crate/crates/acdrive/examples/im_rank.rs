//! Pointwise observability of an induction machine state.

use acdrive::models::{ImParams, ImState};
use acdrive::obsv::{im_delta, im_obsv_matrix, rank_analysis};

fn main() {
    let params = ImParams::<f64>::desk_default();
    let x = ImState {
        i_s: [4.0, -1.5].into(),
        psi_r: [0.6, 0.2].into(),
        omega_e: 250.0,
        t_r: 1.0,
    };
    let rank = rank_analysis(&im_obsv_matrix(&x, &params), 1e-9);
    println!(
        "delta = {:.3e}, rank {} (sigma ratio {:.2e})",
        im_delta(&x, &params),
        rank.rank,
        rank.sigma_min / rank.sigma_max
    );
}
