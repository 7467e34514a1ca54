#include <iostream>

int main(int argc, char** argv) {
  (void)argc;
  (void)argv;
  std::cout << "cm: cli under construction\n";
  return 0;
}
