#include "critlocus/app.hpp"

int main(int argc, char** argv) { return critlocus::app::run(argc, argv); }
