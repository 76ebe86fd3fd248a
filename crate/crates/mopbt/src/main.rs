fn main() {
    std::process::exit(mopbt::cli::main());
}
