fn main() {
    std::process::exit(knot_torsion::cli::run(std::env::args_os()));
}
