namespace riplab {}
