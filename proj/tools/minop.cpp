#include <iostream>

int main() {
    std::cout << "minop: placeholder\n";
    return 0;
}
