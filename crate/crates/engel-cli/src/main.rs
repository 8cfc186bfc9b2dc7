//! `engel` command line: CSV reports over the Engel-group geometry
//! library. Exit codes: 0 success, 2 validation failure, 3 nonconvergence.

use engel_cli::commands::dispatch;

const HELP: &str = "\
engel - computational geometry in the Engel group

USAGE:
    engel <COMMAND> [--flag value]...

COMMANDS:
    degree          pointwise degree table of a surface over a grid
                    flags: --surface F --grid N
                    columns: u1,u2,degree;  summary `# degree= singular_count=`
    beta            spherical factor of a homogeneous coordinate plane
                    flags: --plane eI,eJ --refine N [--xi12 --xi13 --xi23]
                    columns: plane,beta,center1..4,refinement_delta,grid_value
    density         Federer density of the intrinsic measure at a point
                    flags: --surface F [--point a,b] [--degree N] [--radii r1,r2,..]
                    columns: radius,centered,maximized,argmax1..4; `# limit= error= degree=`
    stokes          compare the theta4 line integral with the dtheta4 surface
                    integral on a parameter disk
                    flags: --surface F [--center a,b] (--radius r | --radii r1,..)
                    columns: radius,line,line_error,surface,surface_error,
                             defect,combined_error,normalized_ratio
    blowup          blow-up exponent fits of the adapted graph chart
                    flags: --surface F [--point a,b] [--lambdas m] [--directions k] [--scale s]
                    columns: component,required_degree,is_graph,exponent,
                             fit_residual,graph_error,exact_zero
    diverge         localized-measure divergence probe at a (singular) point
                    flags: --surface F --beta B [--point a,b] [--radii r1,..]
                    columns: radius,mu; summary `# area_slope= ratio_slope= beta=`
    residuals       degree-constraint and horizontality residual suprema
                    flags: --surface F --grid N
                    columns: c14,c24,c34,c13,c23,horizontality
    check-distance  certify the box quasi-norm: triangle defect sampler,
                    box/ball sandwich constant, sampled diameter
                    flags: [--samples N] [--xi12 --xi13 --xi23]
                    columns: kappa3,kappa4,samples,defect,lambda,diameter

GLOBAL FLAGS:
    --config F      JSON run configuration (kappa3, kappa4, zero_tol,
                    base_mesh, levels, mc_samples, monte_carlo, abs_tol,
                    rel_tol, seed, out)
    --seed N        RNG seed (default from ENGEL_SEED, then 0)
    --out F         write the CSV to a file instead of stdout
    --kappa3 X --kappa4 X --tol X --mesh N --levels N

Reports are deterministic: the same command, config and seed give
byte-identical CSV. Exit codes: 0 ok, 2 validation failure, 3 the
requested computation did not converge.
";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help" {
        print!("{HELP}");
        return;
    }
    match dispatch(&args[0], &args[1..]) {
        Ok((csv, out_path)) => match out_path {
            Some(path) => {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("error: cannot write {path}: {e}");
                    std::process::exit(2);
                }
            }
            None => print!("{csv}"),
        },
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}
