//! Parsing for the string forms accepted on the command line.

use anyhow::{bail, Context, Result};
use fsmlattice_core::eca::{eca_run, Boundary, EcaRow};
use fsmlattice_core::engine::{BoundaryPolicy, LatticeState};
use fsmlattice_core::rng::random_lattice;
use fsmlattice_core::{EcaRule, Machine, MachineId, State, Symbol};

/// `45`, `M45`, `00101101`, or `@path` naming a transition-table file.
pub fn machine(arg: &str) -> Result<MachineId> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading machine table {path}"))?;
        return Ok(text.parse::<Machine>()?.encode());
    }
    Ok(arg.parse()?)
}

/// Initial configuration forms:
///
/// - `centered-one`: one `S1` at index `width / 2`
/// - `bits:<0/1 string>`: explicit; `width` may be omitted
/// - `random:<seed>`: SplitMix64 fill
/// - `r90-row:<k>`: Rule-90 generation `k` (null boundary) from a single
///   centred 1
pub fn initial(arg: &str, width: Option<usize>) -> Result<LatticeState> {
    let need_width = || width.with_context(|| format!("--width is required for --init {arg}"));
    if arg == "centered-one" {
        return Ok(LatticeState::centered_one(need_width()?)?);
    }
    let Some((kind, value)) = arg.split_once(':') else {
        bail!(
            "unknown init {arg:?}; expected centered-one, bits:..., random:<seed> or r90-row:<k>"
        );
    };
    let lattice = match kind {
        "bits" => value.parse::<LatticeState>()?,
        "random" => {
            let seed: u64 = value
                .parse()
                .with_context(|| format!("bad seed {value:?}"))?;
            random_lattice(need_width()?, seed)?
        }
        "r90-row" => {
            let k: usize = value
                .parse()
                .with_context(|| format!("bad row index {value:?}"))?;
            let rows = eca_run(
                &EcaRow::single_centered(need_width()?, Boundary::Null),
                EcaRule::R90,
                k,
            );
            let cells = rows[k].cells.iter().map(|&b| State::from_bit(b)).collect();
            LatticeState::new(cells)?
        }
        _ => bail!("unknown init kind {kind:?}"),
    };
    if let Some(w) = width {
        if w != lattice.len() {
            bail!(
                "--width {w} does not match the {}-cell initial row",
                lattice.len()
            );
        }
    }
    Ok(lattice)
}

pub fn symbols(s: &str) -> Result<Vec<Symbol>> {
    s.chars()
        .filter(|c| !matches!(c, ',' | ' '))
        .map(|c| match c {
            '0' => Ok(Symbol::Zero),
            '1' => Ok(Symbol::One),
            _ => bail!("input script may only contain 0 and 1, found {c:?}"),
        })
        .collect()
}

pub fn policy(arg: &str) -> Result<BoundaryPolicy> {
    Ok(match arg {
        "const0" => BoundaryPolicy::constant(Symbol::Zero),
        "const1" => BoundaryPolicy::constant(Symbol::One),
        "forward-r90" => BoundaryPolicy::ForwardR90,
        "reverse-r90" => BoundaryPolicy::ReverseR90Trial,
        _ => match arg.strip_prefix("scripted:") {
            Some(script) => BoundaryPolicy::scripted(symbols(script)?),
            None => bail!("unknown policy {arg:?}; expected const0, const1, forward-r90, reverse-r90 or scripted:<bits>"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_forms() {
        assert_eq!(
            initial("centered-one", Some(5)).unwrap().bit_string(),
            "00100"
        );
        assert_eq!(initial("bits:0110", None).unwrap().bit_string(), "0110");
        assert!(initial("bits:0110", Some(5)).is_err());
        assert!(initial("random:1", None).is_err());
        assert_eq!(
            initial("random:9", Some(40)).unwrap(),
            initial("random:9", Some(40)).unwrap()
        );
        assert_eq!(
            initial("r90-row:2", Some(7)).unwrap().bit_string(),
            "0100010"
        );
        assert!(initial("stripes", Some(4)).is_err());
    }

    #[test]
    fn policies() {
        assert_eq!(
            policy("const1").unwrap(),
            BoundaryPolicy::constant(Symbol::One)
        );
        assert_eq!(
            policy("scripted:1,0,1").unwrap(),
            BoundaryPolicy::scripted(vec![Symbol::One, Symbol::Zero, Symbol::One])
        );
        assert!(policy("scripted:12").is_err());
        assert!(policy("const2").is_err());
    }

    #[test]
    fn machines() {
        assert_eq!(machine("M45").unwrap(), MachineId(45));
        assert_eq!(machine("00110110").unwrap(), MachineId(54));
        assert!(machine("256").is_err());
    }
}
