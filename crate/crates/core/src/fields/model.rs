use alloc::string::String;

use super::{FieldModes, ModeFn};
use crate::filtered::{FilteredVector, ModelSpace, Monomial, OperatorSeries, Precision};
use crate::Error;

/// A field whose modes are explicit operator series on a model space.
pub struct ModelField {
    pub space: ModelSpace,
    pub label: String,
    pub modes: ModeFn<OperatorSeries>,
    pub deep: ModeFn<i64>,
}

impl ModelField {
    pub fn series(&self, mode: i64) -> OperatorSeries {
        (self.modes)(mode)
    }
}

impl FieldModes<Monomial> for ModelField {
    fn apply_to_basis(&self, mode: i64, b: &Monomial, n: u32) -> Result<FilteredVector, Error> {
        self.apply_with_slack(mode, b, n, 0)
    }

    fn apply_with_slack(
        &self,
        mode: i64,
        b: &Monomial,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector, Error> {
        let mut out = FilteredVector::zero(Precision::Finite(n));
        self.series(mode).apply_monomial_with_slack(
            &self.space,
            b,
            &crate::Scalar::one(),
            n,
            slack,
            &mut out,
        )?;
        Ok(out)
    }

    fn apply_vector(
        &self,
        mode: i64,
        v: &FilteredVector,
        n: u32,
        slack: u32,
    ) -> Result<FilteredVector, Error> {
        self.series(mode).apply_with_slack(&self.space, v, n, slack)
    }

    fn input_precision(&self, mode: i64, n: u32) -> u32 {
        self.series(mode).input_precision(n)
    }

    fn deep_image(&self, n: u32) -> i64 {
        (self.deep)(n as i64)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}
