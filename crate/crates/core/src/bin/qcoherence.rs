fn main() {
    std::process::exit(qcoherence::harness::run(std::env::args_os()));
}
