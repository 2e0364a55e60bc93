use super::{FiniteGroup, Subgroup};

/// Short structural label for a subgroup, used only for display.
///
/// Recognises cyclic groups and the non-cyclic groups of order 4, 6, 8 and
/// 12 by order census; anything else is `G<order>`. Labels are not an
/// isomorphism test.
pub fn describe_subgroup(g: &FiniteGroup, s: &Subgroup) -> String {
    let n = s.order();
    if n == 1 {
        return "e".to_string();
    }
    let mut census = vec![0usize; n + 1];
    for &x in s.elems() {
        census[g.element_order(x)] += 1;
    }
    if census[n] > 0 {
        return format!("C{n}");
    }
    let abelian = s
        .elems()
        .iter()
        .all(|&a| s.elems().iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    let involutions = census[2];
    match (n, abelian, involutions) {
        (4, _, _) => "C2xC2".into(),
        (6, _, _) => "S3".into(),
        (8, false, 1) => "Q8".into(),
        (8, false, _) => "D4".into(),
        (8, true, 3) => "C2xC4".into(),
        (8, true, _) => "C2xC2xC2".into(),
        (9, _, _) => "C3xC3".into(),
        (10, _, _) => "D5".into(),
        (12, true, _) => "C2xC6".into(),
        (12, false, 1) => "Dic3".into(),
        (12, false, 3) => "A4".into(),
        (12, false, _) => "D6".into(),
        (24, false, 9) if census[4] == 6 => "S4".into(),
        (60, false, 15) => "A5".into(),
        (120, false, 25) => "S5".into(),
        _ => format!("G{n}"),
    }
}
