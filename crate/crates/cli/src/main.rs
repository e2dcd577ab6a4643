fn main() {
    std::process::exit(qsc::main_entry());
}
