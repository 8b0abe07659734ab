//! Run JSON jobs in-process, the way the command-line tool does.

use toric_picard::job::{parse_input, report, Command};

fn main() {
    let job = parse_input(
        br#"{"lattice_rank": 4,
             "rays": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[-1,-1,-1,-1]],
             "max_cones": [[0,1,2,3],[0,1,2,4],[0,1,3,4],[0,2,3,4],[1,2,3,4]],
             "section": "GENERIC"}"#,
    )
    .unwrap();
    let (bytes, canonical) = report(Command::PicHyp, &job).unwrap();
    println!("input hash {}", canonical.hash());
    println!("{}", String::from_utf8(bytes).unwrap());
}
