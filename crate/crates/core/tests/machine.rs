use std::collections::{BTreeSet, HashMap};

use fsmlattice_core::engine::{run, BoundaryPolicy, LatticeState};
use fsmlattice_core::machine::{canonical, canonical_ids, equivalence_class};
use fsmlattice_core::{Machine, MachineClass, MachineId, State, Symbol};
use proptest::prelude::*;

type Transform = fn(&Machine) -> Machine;

fn ident(m: &Machine) -> Machine {
    *m
}
fn comp(m: &Machine) -> Machine {
    m.complement()
}
fn mirr(m: &Machine) -> Machine {
    m.mirror()
}
fn both(m: &Machine) -> Machine {
    m.complement().mirror()
}

const GROUP: [Transform; 4] = [ident, comp, mirr, both];

#[test]
fn klein_four_group_closed() {
    // composing any two elements lands on the element predicted by the
    // Klein table (each element its own inverse, product of two distinct
    // non-identity elements is the third)
    let product = |a: usize, b: usize| a ^ b;
    for id in MachineId::all() {
        let m = id.machine();
        for a in 0..4 {
            for b in 0..4 {
                let composed = GROUP[a](&GROUP[b](&m));
                assert_eq!(composed, GROUP[product(a, b)](&m), "M{id} {a}∘{b}");
            }
        }
    }
}

#[test]
fn class_count_matches_burnside() {
    let fixed: usize = GROUP
        .iter()
        .map(|g| {
            MachineId::all()
                .filter(|id| g(&id.machine()).encode() == *id)
                .count()
        })
        .sum();
    assert_eq!(fixed % 4, 0);
    assert_eq!(fixed / 4, 76);
    assert_eq!(canonical_ids().len(), 76);
    let orbits: BTreeSet<BTreeSet<MachineId>> = MachineId::all().map(equivalence_class).collect();
    assert_eq!(orbits.len(), 76);
}

#[test]
fn table_rows() {
    let rows: [(u8, [u8; 3]); 6] = [
        (7, [47, 88, 218]),
        (44, [104, 199, 214]),
        (45, [120, 135, 210]),
        (54, [99, 156, 201]),
        (60, [105, 150, 195]),
        (61, [121, 131, 146]),
    ];
    for (id, others) in rows {
        let want: BTreeSet<MachineId> = std::iter::once(id).chain(others).map(MachineId).collect();
        assert_eq!(equivalence_class(MachineId(id)), want, "row {id}");
        assert_eq!(canonical(MachineId(id)), MachineId(id));
    }
}

#[test]
fn classification_counts_match_output_table_count() {
    // the class depends only on the four output bits (6, 4, 2, 0); count
    // those 16 patterns directly and scale by the 16 transition tables
    let mut by_outputs = HashMap::new();
    for phi in 0..16u8 {
        let s0 = (phi >> 3 & 1, phi >> 2 & 1);
        let s1 = (phi >> 1 & 1, phi & 1);
        let kind = if s0.0 != s0.1 || s1.0 != s1.1 {
            MachineClass::MessagePropagating
        } else if s0.0 != s1.0 {
            MachineClass::StateReporting
        } else {
            MachineClass::ConstantNonReporting
        };
        *by_outputs.entry(kind).or_insert(0usize) += 16;
    }
    let mut counted = HashMap::new();
    for id in MachineId::all() {
        *counted.entry(id.machine().classify()).or_insert(0usize) += 1;
    }
    assert_eq!(counted, by_outputs);
    assert_eq!(counted[&MachineClass::StateReporting], 32);
    assert_eq!(counted[&MachineClass::MessagePropagating], 192);
    assert_eq!(counted[&MachineClass::ConstantNonReporting], 32);
}

#[test]
fn bit_layout_is_table_order() {
    for id in MachineId::all() {
        let m = id.machine();
        let bit = |pos: u8| (id.0 >> pos) & 1;
        assert_eq!(m.delta(State::S0, Symbol::Zero).bit(), bit(7));
        assert_eq!(m.phi(State::S0, Symbol::Zero).bit(), bit(6));
        assert_eq!(m.delta(State::S0, Symbol::One).bit(), bit(5));
        assert_eq!(m.phi(State::S0, Symbol::One).bit(), bit(4));
        assert_eq!(m.delta(State::S1, Symbol::Zero).bit(), bit(3));
        assert_eq!(m.phi(State::S1, Symbol::Zero).bit(), bit(2));
        assert_eq!(m.delta(State::S1, Symbol::One).bit(), bit(1));
        assert_eq!(m.phi(State::S1, Symbol::One).bit(), bit(0));
    }
}

#[test]
fn transpose_swaps_state_and_message_roles() {
    for id in MachineId::all() {
        let m = id.machine();
        let t = m.transpose();
        for q in State::ALL {
            for i in Symbol::ALL {
                let (src, inp) = (i.as_state(), q.as_symbol());
                assert_eq!(t.delta(src, inp), m.phi(q, i).as_state());
                assert_eq!(t.phi(src, inp), m.delta(q, i).as_symbol());
            }
        }
    }
}

fn all_lattices(max_n: usize) -> Vec<LatticeState> {
    (1..=max_n)
        .flat_map(|n| {
            (0..1u32 << n).map(move |x| {
                let bits: Vec<u8> = (0..n).map(|k| (x >> k & 1) as u8).collect();
                LatticeState::from_u8s(&bits).unwrap()
            })
        })
        .collect()
}

#[test]
fn symmetries_preserve_dynamics() {
    let lattices = all_lattices(6);
    let zero = BoundaryPolicy::constant(Symbol::Zero);
    let one = BoundaryPolicy::constant(Symbol::One);
    for id in MachineId::all() {
        let m = id.machine();
        let mirror_id = m.mirror().encode();
        let comp_id = m.complement().encode();
        for init in &lattices {
            let base = run(id, init, &zero, 8).unwrap();

            let mirrored = run(mirror_id, &init.mirrored(), &zero, 8).unwrap();
            let expect: Vec<_> = base.rows.iter().map(LatticeState::mirrored).collect();
            assert_eq!(mirrored.rows, expect, "mirror M{id} from {init}");
            assert_eq!(mirrored.outputs(), base.outputs());

            let complemented = run(comp_id, init, &one, 8).unwrap();
            assert_eq!(complemented.rows, base.rows, "complement M{id} from {init}");
            let flipped: Vec<_> = base.outputs().iter().map(|o| o.complement()).collect();
            assert_eq!(complemented.outputs(), flipped);
        }
    }
}

proptest! {
    #[test]
    fn parse_accepts_every_serialisation(id in any::<u8>()) {
        let id = MachineId(id);
        prop_assert_eq!(id.to_string().parse::<MachineId>().unwrap(), id);
        prop_assert_eq!(id.bit_string().parse::<MachineId>().unwrap(), id);
        prop_assert_eq!(id.machine().table().parse::<Machine>().unwrap().encode(), id);
    }

    #[test]
    fn canonical_is_orbit_minimum(id in any::<u8>()) {
        let id = MachineId(id);
        let c = canonical(id);
        prop_assert!(c <= id);
        prop_assert_eq!(equivalence_class(c), equivalence_class(id));
    }
}
