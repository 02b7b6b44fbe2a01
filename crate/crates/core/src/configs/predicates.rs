//! Point-level predicates and completions for corners and squares.

use crate::domain::{Domain, GridPoint, GridVector};
use crate::error::{Error, Result};
use crate::gaussian::GaussianElem;

fn require_distinct(pts: &[GridPoint]) -> Result<()> {
    for (i, a) in pts.iter().enumerate() {
        for b in pts.iter().take(i) {
            if a == b {
                return Err(Error::DegenerateInput(format!(
                    "points must be pairwise distinct, {a} repeats"
                )));
            }
        }
    }
    Ok(())
}

/// Does {a, b, c} form a corner {x, x + w, x + rot90(w)}, w != 0, under some
/// labeling? Orientation-free: both rotation directions count.
pub fn is_isosceles_right(
    a: GridPoint,
    b: GridPoint,
    c: GridPoint,
    domain: &Domain,
) -> Result<bool> {
    require_distinct(&[a, b, c])?;
    for (x, u, v) in [(a, b, c), (b, a, c), (c, a, b)] {
        let wu = domain.sub(u, x);
        let wv = domain.sub(v, x);
        if domain.rot90(wu) == wv || domain.rot90(wv) == wu {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Does {a, b, c} form an axis-parallel corner
/// {(x, y), (x + d, y), (x, y + d)}, d != 0, under some labeling? In the
/// prime plane d is a nonzero residue (wraparound allowed); in the grid a
/// nonzero signed integer.
pub fn is_axis_corner(a: GridPoint, b: GridPoint, c: GridPoint, domain: &Domain) -> Result<bool> {
    require_distinct(&[a, b, c])?;
    for (x, u, v) in [
        (a, b, c),
        (a, c, b),
        (b, a, c),
        (b, c, a),
        (c, a, b),
        (c, b, a),
    ] {
        let du = domain.sub(u, x);
        let dv = domain.sub(v, x);
        if du.dy == 0 && dv.dx == 0 && du.dx == dv.dy && du.dx != 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The unique apex alpha with gamma = alpha + i(alpha - beta), i.e.
/// alpha = (1+i)/2 * beta + (1-i)/2 * gamma in F_p[i]. {alpha, beta, gamma}
/// is then a corner with its right angle at alpha.
pub fn apex(beta: GridPoint, gamma: GridPoint, domain: &Domain) -> Result<GridPoint> {
    if beta == gamma {
        return Err(Error::DegenerateInput(
            "apex of a corner needs two distinct diagonal points".into(),
        ));
    }
    let p = match *domain {
        Domain::PrimePlane { p } => p,
        Domain::IntegerGrid { .. } => {
            return Err(Error::DomainMismatch(
                "apex uses Gaussian halving and is defined on the prime plane only".into(),
            ))
        }
    };
    let b = GaussianElem::from_point(beta, domain)?;
    let g = GaussianElem::from_point(gamma, domain)?;
    let inv2 = domain.inv2()?;
    // (1+i)/2 and (1-i)/2.
    let h_plus = GaussianElem::new(1, 1, p).scale(inv2);
    let h_minus = GaussianElem::new(1, -1, p).scale(inv2);
    let alpha = h_plus.mul(b).add(h_minus.mul(g));
    debug_assert_eq!(
        g,
        alpha.add(alpha.sub(b).times_i()),
        "apex must satisfy gamma = alpha + i(alpha - beta)"
    );
    Ok(alpha.to_point())
}

/// Fourth point of the square spanned by a corner with its right angle at
/// `alpha`: beta + gamma - alpha. Rejects triples whose right angle is not
/// at alpha. On an integer grid the completion can leave the domain.
pub fn fourth_vertex(
    alpha: GridPoint,
    beta: GridPoint,
    gamma: GridPoint,
    domain: &Domain,
) -> Result<GridPoint> {
    require_distinct(&[alpha, beta, gamma])?;
    let wb = domain.sub(beta, alpha);
    let wg = domain.sub(gamma, alpha);
    if domain.rot90(wb) != wg && domain.rot90(wg) != wb {
        return Err(Error::NotACorner);
    }
    let x = beta.x as i64 + gamma.x as i64 - alpha.x as i64;
    let y = beta.y as i64 + gamma.y as i64 - alpha.y as i64;
    domain.point_from_coords(x, y).ok_or_else(|| {
        Error::OutOfDomain(format!(
            "fourth vertex ({x}, {y}) lies outside {domain}"
        ))
    })
}

/// Every point completing {P, Q} to a corner, sorted in row-major order.
///
/// Geometrically: two completions with the right angle at P, two at Q, and
/// two with the right angle at the new point (P and Q as hypotenuse ends).
/// The raw list has six members; in the prime plane coincidences (possible
/// when p = 1 mod 4) are filtered by deduplication, and on the integer grid
/// the hypotenuse pair exists only when P + Q + rot90(Q - P) has both
/// components even, with every candidate outside the grid dropped.
pub fn corner_completions(
    p_pt: GridPoint,
    q_pt: GridPoint,
    domain: &Domain,
) -> Result<Vec<GridPoint>> {
    if p_pt == q_pt {
        return Err(Error::DegenerateInput(
            "corner completions need two distinct points".into(),
        ));
    }
    let w = domain.sub(q_pt, p_pt);
    let r = domain.rot90(w);
    let neg_r = domain.reduce_vec(GridVector::new(-r.dx, -r.dy));

    let mut out: Vec<GridPoint> = Vec::with_capacity(6);
    for cand in [
        domain.add(p_pt, r),
        domain.add(p_pt, neg_r),
        domain.add(q_pt, r),
        domain.add(q_pt, neg_r),
    ]
    .into_iter()
    .flatten()
    {
        out.push(cand);
    }

    // Hypotenuse completions (P + Q +- rot90(w)) / 2.
    let sx = p_pt.x as i64 + q_pt.x as i64;
    let sy = p_pt.y as i64 + q_pt.y as i64;
    match *domain {
        Domain::PrimePlane { p } => {
            let inv2 = domain.inv2()? as i64;
            for sign in [1i64, -1] {
                let hx = (sx + sign * r.dx) * inv2;
                let hy = (sy + sign * r.dy) * inv2;
                out.push(domain.point_from_coords(hx, hy).unwrap());
            }
            let _ = p;
        }
        Domain::IntegerGrid { .. } => {
            for sign in [1i64, -1] {
                let nx = sx + sign * r.dx;
                let ny = sy + sign * r.dy;
                if nx % 2 == 0 && ny % 2 == 0 {
                    if let Some(pt) = domain.point_from_coords(nx / 2, ny / 2) {
                        out.push(pt);
                    }
                }
            }
        }
    }

    debug_assert!(out.iter().all(|&t| t != p_pt && t != q_pt));
    out.sort_by_key(|&t| domain.index(t));
    out.dedup();
    Ok(out)
}

/// Every point completing {P, Q} to an axis-parallel corner, sorted in
/// row-major order.
pub fn axis_corner_completions(
    p_pt: GridPoint,
    q_pt: GridPoint,
    domain: &Domain,
) -> Result<Vec<GridPoint>> {
    if p_pt == q_pt {
        return Err(Error::DegenerateInput(
            "axis corner completions need two distinct points".into(),
        ));
    }
    let w = domain.sub(q_pt, p_pt);
    let mut out: Vec<GridPoint> = Vec::with_capacity(6);

    // Apex P, Q on its row or column.
    if w.dy == 0 {
        out.extend(domain.add(p_pt, GridVector::new(0, w.dx)));
    }
    if w.dx == 0 {
        out.extend(domain.add(p_pt, GridVector::new(w.dy, 0)));
    }
    // Apex Q, P on its row or column.
    let v = domain.sub(p_pt, q_pt);
    if v.dy == 0 {
        out.extend(domain.add(q_pt, GridVector::new(0, v.dx)));
    }
    if v.dx == 0 {
        out.extend(domain.add(q_pt, GridVector::new(v.dy, 0)));
    }
    // P and Q as the two arm ends; the completion is the apex.
    // P = A + (d, 0), Q = A + (0, d): A = (Q.x, P.y), d = P.x - Q.x = Q.y - P.y.
    if domain.reduce(v.dx) == w.dy && w.dy != 0 {
        out.push(GridPoint::new(q_pt.x, p_pt.y));
    }
    // P = A + (0, d), Q = A + (d, 0): A = (P.x, Q.y), d = Q.x - P.x = P.y - Q.y.
    if domain.reduce(v.dy) == w.dx && w.dx != 0 {
        out.push(GridPoint::new(p_pt.x, q_pt.y));
    }

    debug_assert!(out.iter().all(|&t| t != p_pt && t != q_pt));
    out.sort_by_key(|&t| domain.index(t));
    out.dedup();
    Ok(out)
}

/// The two vertices turning diagonal {u, v} into a square:
/// (u + v +- rot90(v - u)) / 2. None when the pair is not representable
/// (integer grid parity, or either vertex outside the grid).
pub fn square_diagonal_completions(
    u: GridPoint,
    v: GridPoint,
    domain: &Domain,
) -> Result<Option<(GridPoint, GridPoint)>> {
    if u == v {
        return Err(Error::DegenerateInput(
            "square diagonal needs two distinct points".into(),
        ));
    }
    let r = domain.rot90(domain.sub(v, u));
    let sx = u.x as i64 + v.x as i64;
    let sy = u.y as i64 + v.y as i64;
    let halves = match *domain {
        Domain::PrimePlane { .. } => {
            let inv2 = domain.inv2()? as i64;
            [
                domain.point_from_coords((sx + r.dx) * inv2, (sy + r.dy) * inv2),
                domain.point_from_coords((sx - r.dx) * inv2, (sy - r.dy) * inv2),
            ]
        }
        Domain::IntegerGrid { .. } => {
            let mut res = [None, None];
            for (slot, sign) in res.iter_mut().zip([1i64, -1]) {
                let nx = sx + sign * r.dx;
                let ny = sy + sign * r.dy;
                if nx % 2 == 0 && ny % 2 == 0 {
                    *slot = domain.point_from_coords(nx / 2, ny / 2);
                }
            }
            res
        }
    };
    Ok(match halves {
        [Some(a), Some(b)] => Some((a, b)),
        _ => None,
    })
}

/// The two vertex pairs extending edge {t, s} to a square, one on each side:
/// {t + r, s + r} and {t - r, s - r} with r = rot90(s - t). Pairs leaving an
/// integer grid are dropped.
pub fn square_edge_completions(
    t: GridPoint,
    s: GridPoint,
    domain: &Domain,
) -> Result<Vec<(GridPoint, GridPoint)>> {
    if t == s {
        return Err(Error::DegenerateInput(
            "square edge needs two distinct points".into(),
        ));
    }
    let r = domain.rot90(domain.sub(s, t));
    let neg_r = domain.reduce_vec(GridVector::new(-r.dx, -r.dy));
    let mut out = Vec::with_capacity(2);
    for v in [r, neg_r] {
        if let (Some(a), Some(b)) = (domain.add(t, v), domain.add(s, v)) {
            out.push((a, b));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;

    fn pt(x: u32, y: u32) -> GridPoint {
        GridPoint::new(x, y)
    }

    #[test]
    fn isosceles_right_example_f5() {
        let d = Domain::prime_plane(5).unwrap();
        // rot90((1,2)) = (3,1) mod 5: apex at the origin.
        assert!(is_isosceles_right(pt(0, 0), pt(1, 2), pt(3, 1), &d).unwrap());
    }

    #[test]
    fn collinear_triple_is_not_isosceles_right() {
        let d = Domain::integer_grid(10).unwrap();
        assert!(!is_isosceles_right(pt(0, 0), pt(1, 0), pt(2, 0), &d).unwrap());
    }

    #[test]
    fn coincident_points_rejected() {
        let d = Domain::prime_plane(5).unwrap();
        assert!(matches!(
            is_isosceles_right(pt(0, 0), pt(0, 0), pt(1, 1), &d),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn axis_corner_wraps_mod_p() {
        let d = Domain::prime_plane(7).unwrap();
        // Apex (6,1), d = 3: x wraps (6+3 = 9 = 2 mod 7), y does not (1+3 = 4).
        assert!(is_axis_corner(pt(6, 1), pt(2, 1), pt(6, 4), &d).unwrap());
        // On the grid the two arms would need d = -4 and d = 3 respectively.
        let g = Domain::integer_grid(7).unwrap();
        assert!(!is_axis_corner(pt(6, 1), pt(2, 1), pt(6, 4), &g).unwrap());
    }

    #[test]
    fn axis_corner_negative_d_on_grid() {
        let d = Domain::integer_grid(5).unwrap();
        // Apex (3, 3) with d = -2.
        assert!(is_axis_corner(pt(3, 3), pt(1, 3), pt(3, 1), &d).unwrap());
    }

    #[test]
    fn every_axis_corner_is_isosceles_right() {
        let d = Domain::prime_plane(5).unwrap();
        let pts: Vec<GridPoint> = d.points().collect();
        for &a in &pts {
            for &b in &pts {
                for &c in &pts {
                    if a == b || a == c || b == c {
                        continue;
                    }
                    if is_axis_corner(a, b, c, &d).unwrap() {
                        assert!(is_isosceles_right(a, b, c, &d).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn apex_satisfies_defining_relation() {
        let d = Domain::prime_plane(5).unwrap();
        // beta = (1,0), gamma = (0,1): solving gamma = alpha + i(alpha - beta)
        // gives alpha = (1,1), and the triple is isosceles right at alpha.
        let a = apex(pt(1, 0), pt(0, 1), &d).unwrap();
        assert_eq!(a, pt(1, 1));
        assert!(is_isosceles_right(a, pt(1, 0), pt(0, 1), &d).unwrap());
    }

    #[test]
    fn apex_is_unique_solution_of_relation() {
        let d = Domain::prime_plane(7).unwrap();
        for beta in d.points() {
            for gamma in d.points() {
                if beta == gamma {
                    continue;
                }
                let alpha = apex(beta, gamma, &d).unwrap();
                let mut solutions = 0;
                for cand in d.points() {
                    let ga = GaussianElem::from_point(cand, &d).unwrap();
                    let gb = GaussianElem::from_point(beta, &d).unwrap();
                    if GaussianElem::from_point(gamma, &d).unwrap()
                        == ga.add(ga.sub(gb).times_i())
                    {
                        assert_eq!(cand, alpha);
                        solutions += 1;
                    }
                }
                assert_eq!(solutions, 1);
            }
        }
    }

    #[test]
    fn fourth_vertex_unit_square() {
        let d = Domain::integer_grid(9).unwrap();
        assert_eq!(fourth_vertex(pt(0, 0), pt(1, 0), pt(0, 1), &d).unwrap(), pt(1, 1));
        // Orientation of the beta/gamma labels does not matter.
        assert_eq!(fourth_vertex(pt(0, 0), pt(0, 1), pt(1, 0), &d).unwrap(), pt(1, 1));
    }

    #[test]
    fn fourth_vertex_rejects_non_corner() {
        let d = Domain::integer_grid(9).unwrap();
        assert!(matches!(
            fourth_vertex(pt(0, 0), pt(1, 0), pt(2, 0), &d),
            Err(Error::NotACorner)
        ));
        // Right angle at (1,0), not at the first argument.
        assert!(matches!(
            fourth_vertex(pt(0, 0), pt(1, 0), pt(1, 1), &d),
            Err(Error::NotACorner)
        ));
    }

    #[test]
    fn fourth_vertex_can_leave_grid() {
        let d = Domain::integer_grid(2).unwrap();
        // Corner at (1,1) with arms to (0,1) and (1,0): fourth point (0,0) ok.
        assert_eq!(fourth_vertex(pt(1, 1), pt(0, 1), pt(1, 0), &d).unwrap(), pt(0, 0));
        // Tilted corner at (1,1) with arms to (2,2) and (0,2): the completion
        // (1,3) falls off a 3x3 board.
        let d3 = Domain::integer_grid(3).unwrap();
        let res = fourth_vertex(pt(1, 1), pt(2, 2), pt(0, 2), &d3);
        assert!(matches!(res, Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn completions_f5_example() {
        let d = Domain::prime_plane(5).unwrap();
        let got = corner_completions(pt(0, 0), pt(1, 0), &d).unwrap();
        let mut want = vec![pt(0, 1), pt(0, 4), pt(1, 1), pt(1, 4), pt(3, 3), pt(3, 2)];
        want.sort_by_key(|&t| d.index(t));
        assert_eq!(got, want);
    }

    #[test]
    fn completions_grid_parity() {
        let d = Domain::integer_grid(9).unwrap();
        // Mixed parity sum: no hypotenuse completions.
        let got = corner_completions(pt(4, 4), pt(5, 4), &d).unwrap();
        assert_eq!(got.len(), 4);
        // Even offsets: all six exist.
        let got = corner_completions(pt(3, 4), pt(5, 4), &d).unwrap();
        assert_eq!(got.len(), 6);
        // Both-odd coordinate sums also admit hypotenuse completions.
        let got = corner_completions(pt(3, 3), pt(4, 4), &d).unwrap();
        assert!(got.contains(&pt(3, 4)) && got.contains(&pt(4, 3)));
    }

    /// Brute-force oracle: completions are exactly the points making an
    /// isosceles right triangle with the pair.
    #[test]
    fn completions_match_predicate_scan() {
        let domains = [Domain::prime_plane(5).unwrap(), Domain::integer_grid(6).unwrap()];
        for d in domains {
            let pts: Vec<GridPoint> = d.points().collect();
            for &a in &pts {
                for &b in &pts {
                    if a == b {
                        continue;
                    }
                    let fast = corner_completions(a, b, &d).unwrap();
                    let slow: Vec<GridPoint> = pts
                        .iter()
                        .copied()
                        .filter(|&t| t != a && t != b)
                        .filter(|&t| is_isosceles_right(a, b, t, &d).unwrap())
                        .collect();
                    assert_eq!(fast, slow, "pair {a}, {b} in {d}");
                    assert!(fast.len() <= 6);
                }
            }
        }
    }

    #[test]
    fn axis_completions_match_predicate_scan() {
        let domains = [Domain::prime_plane(5).unwrap(), Domain::integer_grid(5).unwrap()];
        for d in domains {
            let pts: Vec<GridPoint> = d.points().collect();
            for &a in &pts {
                for &b in &pts {
                    if a == b {
                        continue;
                    }
                    let fast = axis_corner_completions(a, b, &d).unwrap();
                    let slow: Vec<GridPoint> = pts
                        .iter()
                        .copied()
                        .filter(|&t| t != a && t != b)
                        .filter(|&t| is_axis_corner(a, b, t, &d).unwrap())
                        .collect();
                    assert_eq!(fast, slow, "pair {a}, {b} in {d}");
                }
            }
        }
    }

    #[test]
    fn diagonal_completions_recover_unit_square() {
        let d = Domain::integer_grid(4).unwrap();
        let got = square_diagonal_completions(pt(0, 0), pt(1, 1), &d).unwrap();
        let (a, b) = got.unwrap();
        let mut pair = [a, b];
        pair.sort_by_key(|&t| d.index(t));
        assert_eq!(pair, [pt(1, 0), pt(0, 1)]);
        // Odd-parity diagonal has no lattice square.
        assert_eq!(square_diagonal_completions(pt(0, 0), pt(2, 1), &d).unwrap(), None);
    }

    #[test]
    fn edge_completions_give_both_side_squares() {
        let d = Domain::integer_grid(4).unwrap();
        let got = square_edge_completions(pt(1, 1), pt(2, 1), &d).unwrap();
        assert_eq!(got.len(), 2);
        let d_edge = Domain::integer_grid(2).unwrap();
        // On the 2x2 grid one side square falls off the board.
        let got = square_edge_completions(pt(0, 0), pt(1, 0), &d_edge).unwrap();
        assert_eq!(got, vec![(pt(0, 1), pt(1, 1))]);
    }
}
