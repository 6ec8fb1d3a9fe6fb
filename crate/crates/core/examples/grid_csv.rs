//! CSV output along a line, here S(x) for x in [0, 3] at fixed λ.

use hypeval::params::{c64, reference, ComplexJson, ParamSet};
use hypeval::verify::{emit_grid, GridFunction, GridSpec, GridVar};

fn main() -> hypeval::error::Result<()> {
    let (pair, gamma) = reference();
    let spec = GridSpec {
        function: GridFunction::S,
        var: GridVar::X,
        from: 0.0,
        to: 3.0,
        steps: 13,
        im: 0.0,
        params: ParamSet::new(&pair, &gamma),
        x: ComplexJson::from(c64(0.0, 0.0)),
        lambda: ComplexJson::from(c64(0.12, 0.0)),
        n: 0,
    };
    emit_grid(&spec, &mut std::io::stdout().lock())
}
