//! Model manifolds `S^d(r) × M₂`, their constant solutions and kernels.

mod constants;
mod model;

pub use constants::{c_n, constants, omega, two_star, DimensionConstants, PiMultiple};
pub use model::{
    check_gap, constant_solution, kernel_basis, second_variation_check, yamabe_product, AbstractFactor,
    ConstantSolution, HMode, KernelBasis, ProductConfig, SecondVariation, HYP_GAP, HYP_KERNEL, HYP_YAMABE_FACTOR,
};

#[cfg(test)]
mod tests;
