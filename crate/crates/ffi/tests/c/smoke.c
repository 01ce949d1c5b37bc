#include <stdio.h>
#include <string.h>

#include "syncgame.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: %s failed\n", __FILE__, __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  SgDfa *cerny = NULL;
  CHECK(sg_dfa_family("cerny", 4, 0, 0, &cerny) == SG_STATUS_OK);
  CHECK(sg_dfa_states(cerny) == 4);

  SgWinner w;
  CHECK(sg_decide_k(cerny, 1, &w) == SG_STATUS_OK && w == SG_WINNER_ALICE);
  CHECK(sg_decide_k(cerny, 2, &w) == SG_STATUS_OK && w == SG_WINNER_BOB);

  uintptr_t rt = 0;
  CHECK(sg_reset_threshold(cerny, &rt) == SG_STATUS_OK && rt == 9);

  char *word = NULL;
  CHECK(sg_extract_reset_word(cerny, 1, &word) == SG_STATUS_PRECONDITION);
  CHECK(word == NULL);
  CHECK(strstr(sg_last_error(), "precondition") != NULL);

  char *text = NULL;
  CHECK(sg_dfa_serialize(cerny, &text) == SG_STATUS_OK);
  SgDfa *copy = NULL;
  CHECK(sg_dfa_parse(text, &copy) == SG_STATUS_OK);
  CHECK(sg_dfa_letters(copy) == 2);
  sg_string_free(text);

  SgDfa *line = NULL;
  SgLevel level;
  CHECK(sg_dfa_family("one_way_line", 5, 0, 0, &line) == SG_STATUS_OK);
  CHECK(sg_game_level(line, &level) == SG_STATUS_OK && level.kind == SG_LEVEL_KIND_OMEGA);
  CHECK(sg_extract_reset_word(line, 1, &word) == SG_STATUS_OK);
  CHECK(strcmp(word, "a a a a") == 0);
  sg_string_free(word);

  CHECK(sg_dfa_parse("dfa\nstates 2\n", &copy) == SG_STATUS_PARSE);
  CHECK(sg_decide_omega(NULL, &w) == SG_STATUS_NULL_POINTER);

  sg_dfa_free(copy);
  sg_dfa_free(line);
  sg_dfa_free(cerny);
  printf("ok %s\n", sg_version());
  return 0;
}
