// placeholder while the library comes up; replaced by the real CLI below
#include "orbitlab/matrix.hpp"
#include <iostream>

int main() {
    std::cout << "orbitlab scaffold\n";
    return 0;
}
