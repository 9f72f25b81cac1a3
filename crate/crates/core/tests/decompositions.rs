//! Hand-derived symmetric decompositions of the EEC and EEEC systems and
//! their derivatives, checked against dense tables.

use banzhaf_switching::banzhaf::tbp;
use banzhaf_switching::{parse_sop, SymFn, TruthTable, VotingSystem};

/// Named variable space for building tables from products and symmetric blocks.
struct Space {
    names: Vec<String>,
}

impl Space {
    fn new(names: &str) -> Space {
        Space {
            names: names.split(',').map(str::to_string).collect(),
        }
    }

    fn n(&self) -> usize {
        self.names.len()
    }

    fn index(&self, name: &str) -> usize {
        self.names
            .iter()
            .position(|x| x == name)
            .unwrap_or_else(|| panic!("unknown {name}"))
            + 1
    }

    /// Sum of products in the parser's syntax.
    fn sop(&self, text: &str) -> TruthTable {
        parse_sop(text, &self.names)
            .unwrap()
            .to_truth_table()
            .unwrap()
    }

    /// XOR of products separated by `^`.
    fn xsum(&self, text: &str) -> TruthTable {
        text.split('^').fold(
            TruthTable::constant(self.n(), false).unwrap(),
            |acc, term| acc.xor(&self.sop(term)).unwrap(),
        )
    }

    fn sy(&self, charset: &[usize], inputs: &str) -> TruthTable {
        let placement: Vec<usize> = inputs.split(',').map(|v| self.index(v)).collect();
        SymFn::new(placement.len(), charset)
            .unwrap()
            .to_truth_table(&placement, self.n())
            .unwrap()
    }
}

fn and(a: &TruthTable, b: &TruthTable) -> TruthTable {
    a.and(b).unwrap()
}

fn or(a: &TruthTable, b: &TruthTable) -> TruthTable {
    a.or(b).unwrap()
}

fn xor(a: &TruthTable, b: &TruthTable) -> TruthTable {
    a.xor(b).unwrap()
}

fn disjoint(a: &TruthTable, b: &TruthTable) -> bool {
    a.and(b).unwrap().is_zero()
}

fn eec() -> TruthTable {
    VotingSystem::new(12, vec![4, 4, 4, 2, 2, 1])
        .unwrap()
        .truth_table()
        .unwrap()
}

fn eeec() -> TruthTable {
    VotingSystem::new(41, vec![10, 10, 10, 10, 5, 5, 3, 3, 2])
        .unwrap()
        .truth_table()
        .unwrap()
}

const EEC: &str = "F,G,I,B,N,L";
const EEEC: &str = "F,G,I,R,B,N,D,E,L";

#[test]
fn eec_minimal_sum() {
    let s = Space::new(EEC);
    assert_eq!(s.sop("F G I | F G B N | F I B N | G I B N"), eec());
}

#[test]
fn eec_symmetric_forms() {
    let s = Space::new(EEC);
    let f = eec();
    let all3 = s.sy(&[3], "F,G,I");
    let bn = s.sop("B N");

    let or_form = or(&all3, &and(&s.sy(&[2, 3], "F,G,I"), &bn));
    assert_eq!(or_form, f);

    let absorbed = and(
        &and(&s.sy(&[0, 1, 2], "F,G,I"), &s.sy(&[2, 3], "F,G,I")),
        &bn,
    );
    let two_bn = and(&s.sy(&[2], "F,G,I"), &bn);
    assert_eq!(absorbed, two_bn);
    assert_eq!(or(&all3, &two_bn), f);

    assert!(disjoint(&all3, &two_bn));
    assert_eq!(xor(&all3, &two_bn), f);
}

#[test]
fn eec_derivatives() {
    let f = eec();

    let d = Space::new("G,I,B,N,L");
    let bn = d.sop("B N");
    let expanded = xor(
        &xor(&d.sy(&[], "G,I"), &d.sy(&[2], "G,I")),
        &and(&xor(&d.sy(&[2], "G,I"), &d.sy(&[1], "G,I")), &bn),
    );
    let collected = xor(
        &and(&d.sy(&[2], "G,I"), &d.xsum("1 ^ B N")),
        &and(&d.sy(&[1], "G,I"), &bn),
    );
    let df = f.boolean_difference(1).unwrap();
    assert_eq!(expanded, df);
    assert_eq!(collected, df);

    let d = Space::new("F,G,I,N,L");
    let db = f.boolean_difference(4).unwrap();
    assert_eq!(and(&d.sy(&[2], "F,G,I"), &d.sop("N")), db);

    // Over the essential support (L dropped) the weights are 1·3 + 2·1 and 3·1.
    assert_eq!(tbp(&f, 1).unwrap(), 5);
    assert_eq!(tbp(&f, 4).unwrap(), 3);
    assert_eq!(df.weight(), 2 * 5);
    assert_eq!(db.weight(), 2 * 3);
    assert!(f.is_vacuous_in(6).unwrap());
}

#[test]
fn eeec_sum_forms() {
    let s = Space::new(EEEC);
    let f = eeec();
    let pairs = s.sop("B N L | B N E | B N D | N E D | B E D");
    let any = s.sop("B | N | D | E | L");
    let three_of_four = s.sop("F G I | F G R | F I R | G I R");
    let all4 = s.sop("F G I R");

    assert_eq!(or(&and(&pairs, &three_of_four), &and(&any, &all4)), f);
    assert_eq!(three_of_four, s.sy(&[3, 4], "F,G,I,R"));
    assert_eq!(all4, s.sy(&[4], "F,G,I,R"));

    let sy3 = s.sy(&[3], "F,G,I,R");
    let sy4 = s.sy(&[4], "F,G,I,R");
    assert_eq!(or(&and(&pairs, &or(&sy3, &sy4)), &and(&any, &sy4)), f);

    // The pair terms imply the any-of-five term, so Sy{4} absorbs.
    assert!(disjoint(&pairs, &any.complement()));
    let reduced = or(&and(&pairs, &sy3), &and(&any, &sy4));
    assert_eq!(reduced, f);
    assert!(disjoint(&and(&pairs, &sy3), &and(&any, &sy4)));
}

#[test]
fn eeec_xor_form() {
    let s = Space::new(EEEC);
    let lead = "B N L ^ B N E L' ^ B N D E' L' ^ B' N D E ^ B D E N'";
    assert_eq!(s.xsum(lead), s.sop("B N L | B N E | B N D | N D E | B D E"));
    assert_eq!(s.xsum("1 ^ B' N' D' E' L'"), s.sop("B | N | D | E | L"));

    let terms = parse_sop(&lead.replace('^', "|"), &s.names).unwrap();
    assert!(terms.is_disjoint());

    let f = xor(
        &and(&s.xsum(lead), &s.sy(&[3], "F,G,I,R")),
        &and(&s.xsum("1 ^ B' N' D' E' L'"), &s.sy(&[4], "F,G,I,R")),
    );
    assert_eq!(f, eeec());
}

#[test]
fn eeec_derivative_wrt_f() {
    let f = eeec();
    let d = Space::new("G,I,R,B,N,D,E,L");
    let lead = "B N L ^ B N E L' ^ B N D E' L' ^ B' N D E ^ B D E N'";
    let sy3 = d.sy(&[3], "G,I,R");
    let sy2 = d.sy(&[2], "G,I,R");

    let unfactored = xor(
        &xor(&and(&d.xsum(lead), &sy3), &sy2),
        &and(&d.xsum("1 ^ B' N' D' E' L'"), &sy3),
    );
    // The lead block differentiates to Sy(3;{2}) ⊕ Sy(3;{3}), so the bare
    // Sy(3;{2}) term in `unfactored` is wrong.
    let factored = xor(
        &and(&d.xsum(lead), &xor(&sy3, &sy2)),
        &and(&d.xsum("1 ^ B' N' D' E' L'"), &sy3),
    );
    let collected = xor(
        &and(&d.xsum(&format!("1 ^ B' N' D' E' L' ^ {lead}")), &sy3),
        &and(&d.xsum(lead), &sy2),
    );

    let df = f.boolean_difference(1).unwrap();
    assert_eq!(collected, df);
    assert_eq!(factored, df);
    assert_ne!(unfactored, df);

    assert_eq!(
        d.xsum(&format!("1 ^ B' N' D' E' L' ^ {lead}")).weight() / 8,
        20
    );
    assert_eq!(d.xsum(lead).weight() / 8, 11);
    assert_eq!(df.weight(), 20 + 11 * 3);
    assert_eq!(tbp(&f, 1).unwrap(), 53);
}

#[test]
fn eeec_derivative_wrt_b() {
    let f = eeec();
    let d = Space::new("F,G,I,R,N,D,E,L");
    let lead = "N L ^ N E L' ^ N D E' L' ^ N D E ^ D E N'";
    let db = xor(
        &and(&d.xsum(lead), &d.sy(&[3], "F,G,I,R")),
        &and(&d.sop("N' D' E' L'"), &d.sy(&[4], "F,G,I,R")),
    );
    assert_eq!(db, f.boolean_difference(5).unwrap());
    assert_eq!(d.xsum(lead).weight() / 16, 7);
    assert_eq!(db.weight(), 7 * 4 + 1);
}

#[test]
fn eeec_derivative_wrt_d() {
    let f = eeec();
    let d = Space::new("F,G,I,R,B,N,E,L");
    let sy3 = d.sy(&[3], "F,G,I,R");
    let tail = and(&d.sop("B' N' E' L'"), &d.sy(&[4], "F,G,I,R"));
    let dd = f.boolean_difference(7).unwrap();

    // D swings with B and N both in only when E and L are both out.
    let right = xor(&and(&d.xsum("B N E' L' ^ B' N E ^ B E N'"), &sy3), &tail);
    let wrong_polarity = xor(&and(&d.xsum("B N E L' ^ B' N E ^ B E N'"), &sy3), &tail);
    assert_eq!(right, dd);
    assert_ne!(wrong_polarity, dd);
    assert_eq!(wrong_polarity.weight(), dd.weight());
    assert_eq!(dd.weight(), (1 + 2 + 2) * 4 + 1);
}

#[test]
fn eeec_derivative_wrt_l() {
    let f = eeec();
    let d = Space::new("F,G,I,R,B,N,D,E");
    let sy3 = d.sy(&[3], "F,G,I,R");
    let tail = and(&d.sop("B' N' D' E'"), &d.sy(&[4], "F,G,I,R"));
    let dl = f.boolean_difference(9).unwrap();

    let expanded = xor(&and(&d.xsum("B N ^ B N E ^ B N D E'"), &sy3), &tail);
    assert_eq!(expanded, dl);
    // B N ⊕ B N E ⊕ B N D E' reduces to B N D' E'.
    let reduced = xor(&and(&d.sop("B N D' E'"), &sy3), &tail);
    let wrong_polarity = xor(&and(&d.sop("B N D E'"), &sy3), &tail);
    assert_eq!(reduced, dl);
    assert_ne!(wrong_polarity, dl);
    assert_eq!(wrong_polarity.weight(), dl.weight());
    assert_eq!(dl.weight(), 4 + 1);
}

#[test]
fn eeec_lead_factor_split() {
    let d = Space::new("N,D,E,L");
    let lead = d.xsum("N L ^ N E L' ^ N D E' L' ^ N D E ^ D E N'");
    assert_eq!(lead, d.xsum("N L ^ N E L' ^ N D E' L' ^ D E"));

    let c = Space::new("N,L");
    let pieces = [
        (false, false, c.sop("N L")),
        (false, true, c.xsum("N L ^ N L'")),
        (true, false, c.xsum("N L ^ N L'")),
        (true, true, c.xsum("N L ^ N L' ^ 1")),
    ];
    let mut total = 0;
    for (dv, ev, piece) in pieces {
        let cof = lead.restrict(3, ev).unwrap().restrict(2, dv).unwrap();
        assert_eq!(cof, piece);
        total += piece.weight();
    }
    assert_eq!(total, 1 + 2 + 2 + 2);
    assert_eq!(lead.weight(), 7);
}

#[test]
fn eeec_powers() {
    let f = eeec();
    let all: Vec<u64> = (1..=9).map(|i| tbp(&f, i).unwrap()).collect();
    assert_eq!(all, vec![53, 53, 53, 53, 29, 29, 21, 21, 5]);
    assert_eq!(all.iter().sum::<u64>(), 317);
    assert!(f.vacuous_vars().is_empty());
}
