fn main() {
    std::process::exit(wavecraft::run_cli());
}
