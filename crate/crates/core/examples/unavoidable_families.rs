//! Interior and near-boundary unavoidable families on the unit disk, and a
//! family with one sector removed that the probe search catches.

use rconvex::oracles::{check_unavoidable, family_far, family_near};
use rconvex::{Point2, SupportShape};

fn main() -> rconvex::Result<()> {
    let disk = SupportShape::disk(Point2::ORIGIN, 1.0)?;
    let r = 0.5;
    let far = family_far(Point2::new(0.1, -0.2), r)?;
    let near = family_near(Point2::new(0.0, 0.9), r, &disk)?;
    for (name, f) in [("far", &far), ("near", &near), ("far minus one", &far.without_member(2))] {
        let rep = check_unavoidable(f, 20_000, 5)?;
        println!(
            "{name:>14}: {} members, areas {:?}",
            f.members.len(),
            f.members.iter().map(|m| format!("{:.4}", m.area())).collect::<Vec<_>>()
        );
        println!("{:>14}  {} / {} probe balls without a member, worst margin {:.3e}", "", rep.row.failures, rep.row.trials, rep.row.worst_margin);
    }
    Ok(())
}
